#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varbound/model.hpp"
#include "varbound/processes.hpp"

namespace varbound {

/// Weak-law sufficient conditions evaluated as sequences in n.
enum class LlnCondition {
  Markov25,     // (1/n^2) Var(sum X_i) -> 0
  Markov28,     // (1/n) sum Var(X_i) -> 0
  PowerMean30,  // [(1/n) sum Var(X_i)^s]^(1/s) -> 0, s >= 1
  Theorem9,     // Var(n^{-(1+s)} sum X_i) <= C / n^{2s}
  Theorem12,    // mean variance vanishes, or both means stay below C or grow like n^s
};

enum class Verdict { Converging, NotConverging, Inconclusive };

std::string_view to_string(LlnCondition c);
std::string_view to_string(Verdict v);

struct LlnSample {
  std::size_t n = 0;
  double value = 0.0;
  std::optional<double> bound;
};

struct LlnDiagnostic {
  LlnCondition condition = LlnCondition::Markov28;
  std::vector<LlnSample> samples;  // strictly increasing in n
  Verdict verdict = Verdict::Inconclusive;
  double s = 0.0;
  double cap = 0.0;
  double threshold = 0.0;
};

/// How a finite grid stands in for "-> 0" and "= O(n^s)".
struct ConvergenceRule {
  double threshold = 0.05;     // final value must fall below this
  double order_ratio = 10.0;   // value / n^s must stay within [1/r, r] on the grid tail
  double slope_slack = 0.05;   // log-log growth over the grid tail must not exceed s + slack
};

/// Var(X_i) as a function of the 1-based index i.
using VarianceSequence = std::function<double(std::size_t)>;

VarianceSequence variance_sequence(const ProcessModel& process);

/// (1/n^2) sum_{i,j <= n} Cov(X_i, X_j), by direct double sum over the kernel.
double markov25_value(const ProcessModel& process, std::size_t n);

/// (1/n) sum_{i <= n} Var(X_i).
double markov28_value(const VarianceSequence& variances, std::size_t n);

/// [(1/n) sum v_i^r]^(1/r) for non-negative v and r > 0.
double power_mean(std::span<const double> values, double r);
double power_mean(const VarianceProfile& profile, double r);

/// Power mean of Var(X_1..X_n) at exponent s >= 1; dominates markov28_value.
double theorem8_condition(const VarianceSequence& variances, std::size_t n, double s);

struct ScaledVariance {
  double value = 0.0;  // worst case n * sum Var / n^{2+2s}
  double bound = 0.0;  // C / n^{2s}
};

/// Variance chain for n^{-(1+s)} sum X_i. When `cap` is empty it is taken as
/// the largest of the first n variances.
ScaledVariance theorem9_scaled_variance(const VarianceSequence& variances, std::size_t n, double s,
                                        std::optional<double> cap = std::nullopt);

/// H_n - ln n - Euler-Mascheroni.
double harmonic_remainder(std::size_t n);

/// Verdict on whether a sampled sequence tends to 0.
Verdict judge_vanishing(std::span<const LlnSample> samples, double threshold);

/// 1, 2, ..., n_max.
std::vector<std::size_t> full_grid(std::size_t n_max);

/// Evaluates condition 25, 28 or 30 over `grid`.
LlnDiagnostic diagnose(const ProcessModel& process, LlnCondition condition, std::span<const std::size_t> grid,
                       double s = 1.0, const ConvergenceRule& rule = {});

enum class GrowthBranch { BelowCap, SameOrder, Neither };

std::string_view to_string(GrowthBranch b);

struct Theorem12Row {
  std::size_t n = 0;
  double mean_variance = 0.0;    // (1/n) sum Var(X_i)
  double mean_covariance = 0.0;  // (1/n) sum_{i<j} Cov(X_i, X_j)
  double var_of_mean = 0.0;      // Var((1/n) sum X_i)
};

struct Theorem12Report {
  LlnDiagnostic diagnostic;  // samples carry Var((1/n) sum X_i)
  std::vector<Theorem12Row> rows;
  bool mean_variance_vanishes = false;
  GrowthBranch variance_branch = GrowthBranch::Neither;
  GrowthBranch covariance_branch = GrowthBranch::Neither;
};

/// The mean variance and the mean covariance each pick their branch independently.
Theorem12Report theorem12_check(const ProcessModel& process, std::span<const std::size_t> grid, double cap,
                                double s, const ConvergenceRule& rule = {});

}  // namespace varbound
