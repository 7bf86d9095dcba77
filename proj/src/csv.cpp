#include "varbound/csv.hpp"

#include <istream>

#include <fmt/format.h>

#include "varbound/errors.hpp"

namespace varbound {

std::string format_real(double v) { return fmt::format("{:.12g}", v); }

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      line += f;
      continue;
    }
    line += '"';
    for (char c : f) {
      if (c == '"') line += '"';
      line += c;
    }
    line += '"';
  }
  return line;
}

std::size_t CsvDocument::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InvalidInput("CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c != '"') {
        field += c;
      } else if (k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InvalidInput("CSV line has an unterminated quote");
  out.push_back(field);
  return out;
}

}  // namespace

CsvDocument read_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      doc.comments.push_back(line.substr(1));
      continue;
    }
    auto fields = split(line);
    if (!have_header) {
      doc.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != doc.header.size()) {
      throw InvalidInput(fmt::format("CSV row has {} fields, header has {}", fields.size(), doc.header.size()));
    }
    doc.rows.push_back(std::move(fields));
  }
  if (!have_header) throw InvalidInput("CSV has no header");
  return doc;
}

}  // namespace varbound
