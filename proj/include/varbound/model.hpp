#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace varbound {

/// Hypothesis class of a weight vector. Exactly one applies to any finite input.
enum class WeightClass {
  Simplex,      // 0 <= a_i <= 1, sum a_i = 1
  SubSimplex,   // 0 <= a_i <= 1, 0 < sum a_i < 1
  NonNegative,  // a_i >= 0, neither of the above
  General,
};

std::string_view to_string(WeightClass c);

/// Absolute tolerance on sum(a_i) = 1 for Simplex membership.
inline constexpr double kSimplexTolerance = 1e-12;

/// A PSD matrix may have eigenvalues down to -kPsdRelativeTolerance * lambda_max.
inline constexpr double kPsdRelativeTolerance = 1e-10;

class WeightVector {
 public:
  /// Classifies on construction. Throws InvalidInput on empty or non-finite input.
  explicit WeightVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  WeightClass weight_class() const { return class_; }

  double sum() const;
  double abs_sum() const;
  bool all_nonnegative() const;

 private:
  std::vector<double> values_;
  WeightClass class_;
};

WeightVector classify_weights(std::vector<double> values);

/// Per-variable variances sigma_i^2, all finite and >= 0.
class VarianceProfile {
 public:
  explicit VarianceProfile(std::vector<double> variances);

  std::span<const double> values() const { return variances_; }
  double operator[](std::size_t i) const { return variances_[i]; }
  std::size_t size() const { return variances_.size(); }
  double total() const;

 private:
  std::vector<double> variances_;
};

/// Outcome of the correlation-matrix invariant suite.
struct CorrelationCheck {
  bool square = true;
  bool finite = true;
  bool symmetric = true;
  bool unit_diagonal = true;
  bool bounded = true;
  bool psd = true;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;

  bool entrywise_ok() const { return square && finite && symmetric && unit_diagonal && bounded; }
  bool ok() const { return entrywise_ok() && psd; }
};

CorrelationCheck check_correlation(std::size_t n, std::span<const double> row_major);

/// Full (not triangular) n x n correlation matrix.
///
/// Entrywise invariants (symmetry, unit diagonal, |rho| <= 1) are always
/// enforced. Positive semidefiniteness is enforced under Psd::Required; under
/// Psd::AllowHypothetical a non-PSD matrix is kept and flagged, since it
/// corresponds to no random vector.
class CorrelationMatrix {
 public:
  enum class Psd { Required, AllowHypothetical };

  CorrelationMatrix(std::size_t n, std::vector<double> row_major, Psd policy = Psd::Required);

  static CorrelationMatrix identity(std::size_t n);
  static CorrelationMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                     Psd policy = Psd::Required);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const { return entries_; }

  /// False when the matrix was admitted as hypothetical (not PSD).
  bool realizable() const { return psd_; }
  bool off_diagonal_zero() const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
  bool psd_;
};

/// Second-moment model: variances plus correlations.
class CovarianceModel {
 public:
  CovarianceModel(VarianceProfile profile, CorrelationMatrix correlation);

  std::size_t size() const { return profile_.size(); }
  const VarianceProfile& profile() const { return profile_; }
  const CorrelationMatrix& correlation() const { return correlation_; }
  bool hypothetical() const { return !correlation_.realizable(); }

  double sigma(std::size_t i) const { return sigmas_[i]; }
  /// rho_ij sigma_i sigma_j; exactly sigma_i^2 on the diagonal.
  double cov(std::size_t i, std::size_t j) const;

 private:
  VarianceProfile profile_;
  CorrelationMatrix correlation_;
  std::vector<double> sigmas_;
};

/// Random valid correlation matrix from a Gaussian factor G: G G^T rescaled
/// to unit diagonal. Deterministic in (n, seed).
CorrelationMatrix random_correlation(std::size_t n, std::uint64_t seed);

}  // namespace varbound
