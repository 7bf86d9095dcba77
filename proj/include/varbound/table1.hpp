#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varbound {

/// Enumeration of the comparison sum a_i v_i > (sum a_i^2)(sum v_i) over a
/// grid of weights a_i in {1/D, ..., 1} with sum 1 and variances v_i in
/// {1/E, ..., S/E}.
///
/// Two counting methods are provided:
///  - Exact: weights are integer compositions of D; the comparison is done in
///    64-bit integers after clearing denominators, so ties are exact.
///  - FloatResidual: the reference floating-point procedure. Grid values come
///    from a colon operator (first half a + k*d, second half b - (n-k)*d),
///    the last weight is 1 - (sum of the others) and is kept when > 0, and
///    sums are accumulated left to right in double precision. Ties then
///    split by rounding, and residual weights of ~1e-16 admit extra tuples.
enum class Table1Method { Exact, FloatResidual };

std::string_view to_string(Table1Method m);
Table1Method parse_table1_method(std::string_view text);

struct GridSpec {
  std::size_t n = 2;
  int weight_denominator = 10;  // D
  int variance_steps = 20;      // S
  int variance_denominator = 10;  // E
};

struct Table1Row {
  std::size_t n = 0;
  std::uint64_t total = 0;
  std::uint64_t violations = 0;
  double ratio_percent = 0.0;
  Table1Method method = Table1Method::Exact;
  std::uint64_t weight_tuples = 0;
  std::string note;
};

/// Row of the reference table these enumerations are compared against.
struct ReferenceRow {
  std::size_t n;
  std::uint64_t total;
  std::uint64_t violations;
  double ratio_percent;
};

inline constexpr std::array<ReferenceRow, 3> kReferenceTable1{{
    {2, 3600, 520, 14.44},
    {3, 288000, 29137, 10.11},
    {4, 13760000, 799763, 5.81},
}};

/// Percentage with two decimals, truncated as in the reference table.
std::string format_ratio_percent(double percent);

/// All tuples (a_1..a_n), a_i in 1..budget, sum = budget, lexicographic.
std::vector<std::vector<int>> enumerate_weight_compositions(std::size_t n, int budget = 10);

/// Colon-operator grid first:step:last.
std::vector<double> colon_grid(double first, double step, double last);

enum class IterationOrder { Forward, Reverse };

Table1Row run_table1(const GridSpec& grid, Table1Method method = Table1Method::Exact, unsigned workers = 1,
                     IterationOrder order = IterationOrder::Forward);

inline Table1Row run_table1(std::size_t n, Table1Method method = Table1Method::Exact, unsigned workers = 1) {
  return run_table1(GridSpec{n}, method, workers);
}

/// Exact-integer comparison for one grid point (numerators over D and E).
bool table1_violation(std::span<const int> weights, std::span<const int> variances, int weight_denominator);

}  // namespace varbound
