#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varbound {

/// Floats in CSV output carry 12 significant digits.
std::string format_real(double v);

/// Fields holding a comma, quote or newline are quoted.
std::string csv_line(const std::vector<std::string>& fields);

/// CSV as written by the CLI: one header line, data rows, and `#` comment
/// lines (verdicts, notes) which are kept separately.
struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  /// Index of a header column; throws InvalidInput when absent.
  std::size_t column(const std::string& name) const;
};

CsvDocument read_csv(std::istream& in);

}  // namespace varbound
