#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varbound/model.hpp"

namespace varbound {

/// Identifies each upper bound on Var(sum a_i X_i).
enum class BoundTag {
  T1,       // sum a_i s_i^2, simplex weights
  T1prime,  // (sum a_i^2)(sum s_i^2), simplex weights
  T3,       // sum a_i s_i^2, sub-simplex weights
  T4,       // (sum a_i)(sum a_i s_i^2), non-negative weights
  T5,       // (sum |a_i|)(sum |a_i| s_i^2), any weights
  C2chain,  // chain T5 <= sum |a_i| s_i^2 <= sum s_i^2 when sum |a_i| <= 1
  C3chain,  // chain sum a_i^2 s_i^2 <= sum |a_i| s_i^2 <= sum s_i^2, uncorrelated
};

std::string_view to_string(BoundTag tag);

struct BoundEntry {
  BoundTag tag;
  bool applicable = false;
  double value = 0.0;
  double slack = 0.0;          // value - exact, meaningful when applicable
  std::vector<double> chain;   // chain members left to right (chain tags only)
};

struct BoundReport {
  double exact = 0.0;
  WeightClass weight_class = WeightClass::General;
  bool hypothetical = false;
  std::vector<BoundEntry> entries;
  std::vector<std::string> violations;

  const BoundEntry& at(BoundTag tag) const;
  bool ok() const { return violations.empty(); }
};

/// Tolerated negative slack for an applicable bound.
double slack_tolerance(double exact);

/// sum_i a_i^2 s_i^2 + 2 sum_{i<j} a_i a_j Cov(X_i, X_j). Values within
/// -1e-9 * scale of zero are clamped to 0.
double exact_variance(const WeightVector& weights, const CovarianceModel& model);

/// sum a_i s_i^2. Requires Simplex or SubSimplex weights.
double bound_theorem1(const WeightVector& weights, const VarianceProfile& profile);
/// (sum a_i^2)(sum s_i^2). Requires Simplex weights.
double bound_theorem1prime(const WeightVector& weights, const VarianceProfile& profile);
/// (sum a_i)(sum a_i s_i^2). Requires a_i >= 0.
double bound_theorem4(const WeightVector& weights, const VarianceProfile& profile);
/// (sum |a_i|)(sum |a_i| s_i^2). Any weights.
double bound_theorem5(const WeightVector& weights, const VarianceProfile& profile);

/// Exact variance plus every bound with its applicability, slack and chain
/// checks. Dominance checks are skipped for hypothetical (non-PSD) models.
BoundReport bound_report(const WeightVector& weights, const CovarianceModel& model);

/// A = diag(a) - a a^T.
Eigen::MatrixXd weight_gram_complement(const WeightVector& weights);

/// Closed form of the principal minor of A on `subset` (0-based, strictly
/// increasing): (prod a_i)(1 - sum a_i).
double principal_minor(const WeightVector& weights, std::span<const std::size_t> subset);

/// Determinant of A restricted to `subset`, by LU factorisation.
double principal_minor_direct(const Eigen::MatrixXd& a, std::span<const std::size_t> subset);

struct PsdVerdict {
  enum class Method { ExhaustiveMinors, Eigenvalue };

  bool psd = true;
  Method method = Method::ExhaustiveMinors;
  std::vector<std::size_t> witness_subset;  // violating subset (minor route)
  Eigen::VectorXd witness_vector;           // eigenvector of the most negative eigenvalue
  double worst_value = 0.0;                 // smallest minor or eigenvalue seen
  std::size_t minors_cross_checked = 0;
  double max_minor_discrepancy = 0.0;       // |closed form - determinant| / max(1, |det|)
  bool minor_formula_consistent = true;
};

inline constexpr std::size_t kExhaustiveMinorLimit = 12;
inline constexpr double kMinorTolerance = 1e-12;
inline constexpr double kMinorFormulaTolerance = 1e-10;

/// Decides whether A is PSD: every principal minor for n <= 12, eigenvalues
/// above that. Always cross-checks the closed-form minor against direct
/// determinants on subsets of size <= 5 (of the first 12 indices).
PsdVerdict check_A_psd(const WeightVector& weights);

struct CovarianceSumBounds {
  double lower = 0.0;   // -(1/n) sum s_i^2
  double upper = 0.0;   // (1 - 1/n) sum s_i^2
  double actual = 0.0;  // (2/n) sum_{i<j} Cov(X_i, X_j)
  bool holds = true;    // lower <= actual <= upper (only asserted for PSD models)
};

CovarianceSumBounds covariance_sum_bounds(const CovarianceModel& model);

}  // namespace varbound
