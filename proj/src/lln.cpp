#include "varbound/lln.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "varbound/errors.hpp"
#include "varbound/numeric.hpp"

namespace varbound {

std::string_view to_string(LlnCondition c) {
  switch (c) {
    case LlnCondition::Markov25: return "25";
    case LlnCondition::Markov28: return "28";
    case LlnCondition::PowerMean30: return "30";
    case LlnCondition::Theorem9: return "32";
    case LlnCondition::Theorem12: return "36";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging: return "Converging";
    case Verdict::NotConverging: return "NotConverging";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

std::string_view to_string(GrowthBranch b) {
  switch (b) {
    case GrowthBranch::BelowCap: return "below-cap";
    case GrowthBranch::SameOrder: return "same-order";
    case GrowthBranch::Neither: return "neither";
  }
  return "unknown";
}

VarianceSequence variance_sequence(const ProcessModel& process) {
  return [process](std::size_t i) { return process.variance(i); };
}

double markov25_value(const ProcessModel& process, std::size_t n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  std::vector<double> rows(n);
  for (std::size_t i = 1; i <= n; ++i) {
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) s += kernel_cov(process, i, j);
    rows[i - 1] = s;
  }
  const double nd = static_cast<double>(n);
  return pairwise_sum(rows) / (nd * nd);
}

namespace {

std::vector<double> first_variances(const VarianceSequence& variances, std::size_t n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) {
    v[i - 1] = variances(i);
    if (!(v[i - 1] >= 0.0) || !std::isfinite(v[i - 1])) {
      throw InvalidInput(fmt::format("variance {} is negative or not finite", i));
    }
  }
  return v;
}

}  // namespace

double markov28_value(const VarianceSequence& variances, std::size_t n) {
  const auto v = first_variances(variances, n);
  return pairwise_sum(v) / static_cast<double>(n);
}

double power_mean(std::span<const double> values, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("power mean exponent must be > 0");
  if (values.empty()) throw InvalidInput("power mean of an empty sequence");
  double top = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("power mean needs finite non-negative values");
    top = std::max(top, v);
  }
  if (top == 0.0) return 0.0;
  // Scaled by the maximum so large r cannot overflow.
  std::vector<double> powered(values.size());
  std::transform(values.begin(), values.end(), powered.begin(), [top, r](double v) { return std::pow(v / top, r); });
  const double mean = pairwise_sum(powered) / static_cast<double>(values.size());
  return top * std::pow(mean, 1.0 / r);
}

double power_mean(const VarianceProfile& profile, double r) { return power_mean(profile.values(), r); }

double theorem8_condition(const VarianceSequence& variances, std::size_t n, double s) {
  if (!(s >= 1.0)) throw InvalidInput("power-mean condition needs s >= 1");
  const auto v = first_variances(variances, n);
  return power_mean(v, s);
}

ScaledVariance theorem9_scaled_variance(const VarianceSequence& variances, std::size_t n, double s,
                                        std::optional<double> cap) {
  if (!(s > 0.0)) throw InvalidInput("scaled variance needs s > 0");
  const auto v = first_variances(variances, n);
  const double largest = *std::max_element(v.begin(), v.end());
  double c = largest;
  if (cap) {
    if (!(*cap > 0.0)) throw InvalidInput("variance cap C must be > 0");
    if (largest > *cap) throw InvalidInput(fmt::format("variance {} exceeds the cap {}", largest, *cap));
    c = *cap;
  }
  const double nd = static_cast<double>(n);
  ScaledVariance out;
  out.value = pairwise_sum(v) / std::pow(nd, 1.0 + 2.0 * s);
  out.bound = c / std::pow(nd, 2.0 * s);
  if (out.value > out.bound * (1.0 + 1e-12)) {
    throw InvariantViolation("scaled variance exceeds C / n^{2s}");
  }
  return out;
}

double harmonic_remainder(std::size_t n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  return harmonic_number(n) - std::log(static_cast<double>(n)) - kEulerMascheroni;
}

namespace {

std::span<const LlnSample> grid_tail(std::span<const LlnSample> samples) {
  const std::size_t start = std::min(samples.size() / 2, samples.size() - 2);
  return samples.subspan(start);
}

void require_grid(std::span<const std::size_t> grid) {
  if (grid.empty()) throw InvalidInput("n grid is empty");
  if (grid.front() < 1) throw InvalidInput("n grid starts at 1");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) throw InvalidInput("n grid must be strictly increasing");
  }
}

/// Running sums of variances and of off-diagonal covariances (i < j) over
/// 1..n_max, read off at the grid points.
struct CumulativeMoments {
  std::vector<double> variance_sum;
  std::vector<double> covariance_sum;
};

CumulativeMoments cumulative_moments(const ProcessModel& process, std::span<const std::size_t> grid) {
  CumulativeMoments out;
  double var_sum = 0.0;
  double cov_sum = 0.0;
  std::size_t next = 0;
  std::vector<double> column;
  for (std::size_t n = 1; n <= grid.back(); ++n) {
    var_sum += kernel_cov(process, n, n);
    column.assign(n - 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) column[i - 1] = kernel_cov(process, i, n);
    cov_sum += pairwise_sum(column);
    if (n == grid[next]) {
      out.variance_sum.push_back(var_sum);
      out.covariance_sum.push_back(cov_sum);
      ++next;
    }
  }
  return out;
}

}  // namespace

Verdict judge_vanishing(std::span<const LlnSample> samples, double threshold) {
  if (samples.size() < 2) return Verdict::Inconclusive;
  const auto tail = grid_tail(samples);
  bool decreasing = true;
  for (std::size_t k = 1; k < tail.size(); ++k) decreasing = decreasing && tail[k].value < tail[k - 1].value;
  const double first = tail.front().value;
  const double last = tail.back().value;
  if (decreasing && last < threshold) return Verdict::Converging;
  if (last >= first * (1.0 - 1e-9)) return Verdict::NotConverging;
  return Verdict::Inconclusive;
}

std::vector<std::size_t> full_grid(std::size_t n_max) {
  std::vector<std::size_t> g(n_max);
  for (std::size_t i = 0; i < n_max; ++i) g[i] = i + 1;
  return g;
}

LlnDiagnostic diagnose(const ProcessModel& process, LlnCondition condition, std::span<const std::size_t> grid,
                       double s, const ConvergenceRule& rule) {
  require_grid(grid);
  LlnDiagnostic d;
  d.condition = condition;
  d.threshold = rule.threshold;
  d.s = s;
  const auto variances = variance_sequence(process);
  switch (condition) {
    case LlnCondition::Markov25: {
      const auto m = cumulative_moments(process, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double nd = static_cast<double>(grid[k]);
        d.samples.push_back({grid[k], (m.variance_sum[k] + 2.0 * m.covariance_sum[k]) / (nd * nd), {}});
      }
      break;
    }
    case LlnCondition::Markov28:
      for (std::size_t n : grid) d.samples.push_back({n, markov28_value(variances, n), {}});
      break;
    case LlnCondition::PowerMean30:
      for (std::size_t n : grid) d.samples.push_back({n, theorem8_condition(variances, n, s), {}});
      break;
    default:
      throw InvalidInput(fmt::format("condition {} is not a sequence diagnostic", to_string(condition)));
  }
  d.verdict = judge_vanishing(d.samples, rule.threshold);
  return d;
}

namespace {

GrowthBranch classify_branch(std::span<const std::size_t> grid, std::span<const double> q, double cap, double s,
                               const ConvergenceRule& rule) {
  if (std::all_of(q.begin(), q.end(), [cap](double v) { return std::abs(v) < cap; })) {
    return GrowthBranch::BelowCap;
  }
  const std::size_t start = grid.size() < 2 ? 0 : std::min(grid.size() / 2, grid.size() - 2);
  for (std::size_t k = start; k < grid.size(); ++k) {
    const double ratio = std::abs(q[k]) / std::pow(static_cast<double>(grid[k]), s);
    if (ratio < 1.0 / rule.order_ratio || ratio > rule.order_ratio) return GrowthBranch::Neither;
  }
  if (grid.size() >= 2) {
    const double q0 = std::abs(q[start]);
    const double q1 = std::abs(q.back());
    const double slope = std::log(q1 / q0) / std::log(static_cast<double>(grid.back()) / static_cast<double>(grid[start]));
    if (slope > s + rule.slope_slack) return GrowthBranch::Neither;
  }
  return GrowthBranch::SameOrder;
}

}  // namespace

Theorem12Report theorem12_check(const ProcessModel& process, std::span<const std::size_t> grid, double cap, double s,
                                const ConvergenceRule& rule) {
  require_grid(grid);
  if (!(cap > 0.0)) throw InvalidInput("cap C must be > 0");
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("exponent s must lie in (0, 1)");

  const auto m = cumulative_moments(process, grid);
  Theorem12Report r;
  r.diagnostic.condition = LlnCondition::Theorem12;
  r.diagnostic.s = s;
  r.diagnostic.cap = cap;
  r.diagnostic.threshold = rule.threshold;

  std::vector<LlnSample> mean_variance;
  std::vector<double> var_q;
  std::vector<double> cov_q;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double nd = static_cast<double>(grid[k]);
    Theorem12Row row;
    row.n = grid[k];
    row.mean_variance = m.variance_sum[k] / nd;
    row.mean_covariance = m.covariance_sum[k] / nd;
    row.var_of_mean = (row.mean_variance + 2.0 * row.mean_covariance) / nd;
    r.rows.push_back(row);
    r.diagnostic.samples.push_back({row.n, row.var_of_mean, {}});
    mean_variance.push_back({row.n, row.mean_variance, {}});
    var_q.push_back(row.mean_variance);
    cov_q.push_back(row.mean_covariance);
  }

  r.mean_variance_vanishes = judge_vanishing(mean_variance, rule.threshold) == Verdict::Converging;
  r.variance_branch = classify_branch(grid, var_q, cap, s, rule);
  r.covariance_branch = classify_branch(grid, cov_q, cap, s, rule);
  const bool bounded_growth =
      r.variance_branch != GrowthBranch::Neither && r.covariance_branch != GrowthBranch::Neither;
  r.diagnostic.verdict = (r.mean_variance_vanishes || bounded_growth) ? Verdict::Converging : Verdict::NotConverging;
  return r;
}

}  // namespace varbound
