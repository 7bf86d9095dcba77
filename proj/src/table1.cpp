#include "varbound/table1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "varbound/errors.hpp"

namespace varbound {

std::string_view to_string(Table1Method m) {
  return m == Table1Method::Exact ? "exact" : "float";
}

Table1Method parse_table1_method(std::string_view text) {
  if (text == "exact") return Table1Method::Exact;
  if (text == "float") return Table1Method::FloatResidual;
  throw InvalidInput(fmt::format("unknown table1 method '{}' (expected exact or float)", text));
}

namespace {

void compositions(std::size_t slots, int remaining, int budget, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    if (remaining >= 1 && remaining <= budget) {
      prefix.push_back(remaining);
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (int a = 1; a <= std::min(budget, remaining - static_cast<int>(slots) + 1); ++a) {
    prefix.push_back(a);
    compositions(slots - 1, remaining - a, budget, prefix, out);
    prefix.pop_back();
  }
}

/// Advances an odometer over {lo..hi}^n; returns false after the last tuple.
bool advance(std::vector<int>& digits, int lo, int hi, IterationOrder order) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (order == IterationOrder::Forward) {
      if (digits[k] < hi) {
        ++digits[k];
        return true;
      }
      digits[k] = lo;
    } else {
      if (digits[k] > lo) {
        --digits[k];
        return true;
      }
      digits[k] = hi;
    }
  }
  return false;
}

std::uint64_t int_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

template <class Fn>
std::uint64_t parallel_count(std::size_t items, unsigned workers, Fn&& count_item) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(items, 1))));
  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < items; i += workers) partial[w] += count_item(i);
      });
    }
  }
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

std::uint64_t count_exact(const GridSpec& g, const std::vector<std::vector<int>>& weights, unsigned workers,
                          IterationOrder order) {
  const std::size_t n = g.n;
  return parallel_count(weights.size(), workers, [&](std::size_t idx) {
    const auto& a = order == IterationOrder::Forward ? weights[idx] : weights[weights.size() - 1 - idx];
    std::int64_t sq = 0;
    for (int x : a) sq += static_cast<std::int64_t>(x) * x;
    const int start = order == IterationOrder::Forward ? 1 : g.variance_steps;
    std::vector<int> b(n, start);
    std::uint64_t count = 0;
    do {
      std::int64_t dot = 0;
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        dot += static_cast<std::int64_t>(a[i]) * b[i];
        sum += b[i];
      }
      // a = A/D, v = B/E: sum a v > (sum a^2)(sum v)  <=>  D sum A B > (sum A^2)(sum B)
      if (g.weight_denominator * dot > sq * sum) ++count;
    } while (advance(b, 1, g.variance_steps, order));
    return count;
  });
}

std::vector<std::vector<double>> float_weight_tuples(const GridSpec& g) {
  const double step = 1.0 / g.weight_denominator;
  const auto grid = colon_grid(step, step, 1.0);
  const int top = static_cast<int>(grid.size());
  std::vector<std::vector<double>> out;
  if (g.n < 2) return out;
  std::vector<int> idx(g.n - 1, 0);
  do {
    double s = 0.0;
    for (int k : idx) s += grid[static_cast<std::size_t>(k)];
    const double last = 1.0 - s;
    if (last > 0.0) {
      std::vector<double> a;
      for (int k : idx) a.push_back(grid[static_cast<std::size_t>(k)]);
      a.push_back(last);
      out.push_back(std::move(a));
    }
  } while (advance(idx, 0, top - 1, IterationOrder::Forward));
  return out;
}

std::uint64_t count_float(const GridSpec& g, const std::vector<std::vector<double>>& weights, unsigned workers,
                          IterationOrder order) {
  const double vstep = 1.0 / g.variance_denominator;
  const auto vgrid = colon_grid(vstep, vstep, static_cast<double>(g.variance_steps) / g.variance_denominator);
  const int top = static_cast<int>(vgrid.size()) - 1;
  const std::size_t n = g.n;
  return parallel_count(weights.size(), workers, [&](std::size_t idx) {
    const auto& a = order == IterationOrder::Forward ? weights[idx] : weights[weights.size() - 1 - idx];
    double sq = 0.0;
    for (double x : a) sq += x * x;
    std::vector<int> b(n, order == IterationOrder::Forward ? 0 : top);
    std::uint64_t count = 0;
    do {
      double dot = 0.0;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = vgrid[static_cast<std::size_t>(b[i])];
        dot += a[i] * v;
        sum += v;
      }
      if (dot > sq * sum) ++count;
    } while (advance(b, 0, top, order));
    return count;
  });
}

const ReferenceRow* reference_row(const GridSpec& g) {
  if (g.weight_denominator != 10 || g.variance_steps != 20 || g.variance_denominator != 10) return nullptr;
  for (const auto& r : kReferenceTable1) {
    if (r.n == g.n) return &r;
  }
  return nullptr;
}

std::string describe(const Table1Row& row, const GridSpec& g, std::uint64_t exact_tuples,
                     std::uint64_t float_tuples) {
  const ReferenceRow* ref = reference_row(g);
  if (ref == nullptr) return {};
  const std::uint64_t per_tuple = int_pow(static_cast<std::uint64_t>(g.variance_steps), g.n);
  std::vector<std::string> parts;
  if (row.total == ref->total && row.violations == ref->violations) {
    parts.push_back(fmt::format("matches reference row n={} ({} cases, {} violations)", ref->n, ref->total,
                                ref->violations));
  }
  if (row.total != ref->total) {
    parts.push_back(fmt::format(
        "total {} = {} weight tuples x {} variance tuples differs from the reference total {}; the reference "
        "corresponds to {} weight tuples, which is what the floating-point residual-weight enumeration admits "
        "({} exact compositions plus {} tuples whose residual last weight is a rounding remainder > 0)",
        row.total, row.weight_tuples, per_tuple, ref->total, ref->total / per_tuple, exact_tuples,
        float_tuples - exact_tuples));
  }
  if (row.violations != ref->violations) {
    parts.push_back(fmt::format(
        "violations {} differ from the reference {}; exact integer comparison breaks ties strictly, while the "
        "reference floating-point comparison counts some rounding-split ties",
        row.violations, ref->violations));
  }
  std::string note;
  for (const auto& p : parts) {
    if (!note.empty()) note += "; ";
    note += p;
  }
  return note;
}

}  // namespace

std::string format_ratio_percent(double percent) {
  return fmt::format("{:.2f}", std::floor(percent * 100.0 + 1e-9) / 100.0);
}

std::vector<std::vector<int>> enumerate_weight_compositions(std::size_t n, int budget) {
  if (n < 1) throw InvalidInput("composition needs n >= 1");
  std::vector<std::vector<int>> out;
  if (n > static_cast<std::size_t>(budget)) return out;
  std::vector<int> prefix;
  compositions(n, budget, budget, prefix, out);
  return out;
}

std::vector<double> colon_grid(double first, double step, double last) {
  if (!(step > 0.0) || last < first) throw InvalidInput("colon grid needs step > 0 and last >= first");
  const auto count = static_cast<std::size_t>(std::llround((last - first) / step));
  std::vector<double> g(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    g[k] = 2 * k <= count ? first + static_cast<double>(k) * step
                          : last - static_cast<double>(count - k) * step;
  }
  return g;
}

bool table1_violation(std::span<const int> weights, std::span<const int> variances, int weight_denominator) {
  if (weights.size() != variances.size()) throw InvalidInput("weight and variance tuples differ in length");
  std::int64_t dot = 0;
  std::int64_t sq = 0;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    dot += static_cast<std::int64_t>(weights[i]) * variances[i];
    sq += static_cast<std::int64_t>(weights[i]) * weights[i];
    sum += variances[i];
  }
  return weight_denominator * dot > sq * sum;
}

Table1Row run_table1(const GridSpec& g, Table1Method method, unsigned workers, IterationOrder order) {
  if (g.n < 2) throw InvalidInput("table1 needs n >= 2");
  if (g.weight_denominator < 1 || g.variance_steps < 1 || g.variance_denominator < 1) {
    throw InvalidInput("table1 grid bounds must be positive");
  }
  const std::uint64_t per_tuple = int_pow(static_cast<std::uint64_t>(g.variance_steps), g.n);
  const auto exact_weights = enumerate_weight_compositions(g.n, g.weight_denominator);

  Table1Row row;
  row.n = g.n;
  row.method = method;
  std::uint64_t float_tuples = 0;
  if (method == Table1Method::Exact) {
    row.weight_tuples = exact_weights.size();
    row.violations = count_exact(g, exact_weights, workers, order);
    if (reference_row(g) != nullptr) float_tuples = float_weight_tuples(g).size();
  } else {
    const auto weights = float_weight_tuples(g);
    float_tuples = weights.size();
    row.weight_tuples = weights.size();
    row.violations = count_float(g, weights, workers, order);
  }
  row.total = row.weight_tuples * per_tuple;
  row.ratio_percent = row.total == 0 ? 0.0 : 100.0 * static_cast<double>(row.violations) / static_cast<double>(row.total);
  row.note = describe(row, g, exact_weights.size(), float_tuples);
  return row;
}

}  // namespace varbound
