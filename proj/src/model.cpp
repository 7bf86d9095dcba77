#include "varbound/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "varbound/errors.hpp"
#include "varbound/numeric.hpp"

namespace varbound {

std::string_view to_string(WeightClass c) {
  switch (c) {
    case WeightClass::Simplex: return "simplex";
    case WeightClass::SubSimplex: return "sub-simplex";
    case WeightClass::NonNegative: return "non-negative";
    case WeightClass::General: return "general";
  }
  return "unknown";
}

namespace {

WeightClass classify(std::span<const double> a) {
  bool nonneg = true;
  bool unit = true;
  double sum = 0.0;
  for (double x : a) {
    nonneg = nonneg && x >= 0.0;
    unit = unit && x >= 0.0 && x <= 1.0;
    sum += x;
  }
  if (unit && std::abs(sum - 1.0) <= kSimplexTolerance) return WeightClass::Simplex;
  if (unit && sum > 0.0 && sum < 1.0) return WeightClass::SubSimplex;
  if (nonneg) return WeightClass::NonNegative;
  return WeightClass::General;
}

}  // namespace

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("weight vector is empty");
  for (double x : values_) {
    if (!std::isfinite(x)) throw InvalidInput("weight vector has a non-finite entry");
  }
  class_ = classify(values_);
}

double WeightVector::sum() const {
  double s = 0.0;
  for (double x : values_) s += x;
  return s;
}

double WeightVector::abs_sum() const {
  double s = 0.0;
  for (double x : values_) s += std::abs(x);
  return s;
}

bool WeightVector::all_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

WeightVector classify_weights(std::vector<double> values) { return WeightVector(std::move(values)); }

VarianceProfile::VarianceProfile(std::vector<double> variances) : variances_(std::move(variances)) {
  for (double v : variances_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("variances must be finite and non-negative");
    }
  }
}

double VarianceProfile::total() const { return pairwise_sum(variances_); }

CorrelationCheck check_correlation(std::size_t n, std::span<const double> m) {
  CorrelationCheck c;
  if (m.size() != n * n || n == 0) {
    c.square = false;
    c.psd = false;
    return c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m[i * n + j];
      if (!std::isfinite(v)) c.finite = false;
      if (v != m[j * n + i]) c.symmetric = false;
      if (i == j && v != 1.0) c.unit_diagonal = false;
      if (std::abs(v) > 1.0) c.bounded = false;
    }
  }
  if (!c.finite || !c.symmetric) {
    c.psd = false;
    return c;
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      m.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  c.min_eigenvalue = ev.minCoeff();
  c.max_eigenvalue = ev.maxCoeff();
  c.psd = c.min_eigenvalue >= -kPsdRelativeTolerance * std::max(c.max_eigenvalue, 0.0);
  return c;
}

CorrelationMatrix::CorrelationMatrix(std::size_t n, std::vector<double> row_major, Psd policy)
    : n_(n), entries_(std::move(row_major)) {
  const CorrelationCheck c = check_correlation(n_, entries_);
  if (!c.square) throw InvalidInput("correlation matrix must be square and match the variable count");
  if (!c.finite) throw InvalidInput("correlation matrix has a non-finite entry");
  if (!c.symmetric) throw InvalidInput("correlation matrix is not symmetric");
  if (!c.unit_diagonal) throw InvalidInput("correlation matrix diagonal must be 1");
  if (!c.bounded) throw InvalidInput("correlation entries must satisfy |rho| <= 1");
  if (!c.psd && policy == Psd::Required) {
    throw InvalidInput("correlation matrix is not positive semidefinite (min eigenvalue " +
                       std::to_string(c.min_eigenvalue) + ")");
  }
  psd_ = c.psd;
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return CorrelationMatrix(n, std::move(e));
}

CorrelationMatrix CorrelationMatrix::from_rows(const std::vector<std::vector<double>>& rows, Psd policy) {
  const std::size_t n = rows.size();
  std::vector<double> e;
  e.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw InvalidInput("correlation matrix rows must all have length n");
    e.insert(e.end(), row.begin(), row.end());
  }
  return CorrelationMatrix(n, std::move(e), policy);
}

bool CorrelationMatrix::off_diagonal_zero() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j && entries_[i * n_ + j] != 0.0) return false;
    }
  }
  return true;
}

CovarianceModel::CovarianceModel(VarianceProfile profile, CorrelationMatrix correlation)
    : profile_(std::move(profile)), correlation_(std::move(correlation)) {
  if (profile_.size() != correlation_.size()) {
    throw InvalidInput("variance profile and correlation matrix dimensions differ");
  }
  sigmas_.reserve(profile_.size());
  for (double v : profile_.values()) sigmas_.push_back(std::sqrt(v));
}

double CovarianceModel::cov(std::size_t i, std::size_t j) const {
  if (i == j) return profile_[i];
  return correlation_(i, j) * sigmas_[i] * sigmas_[j];
}

CorrelationMatrix random_correlation(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("random_correlation needs n >= 1");
  constexpr int kRetryBudget = 16;
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Engine rng = make_engine(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) g(i, j) = normal(rng);
    }
    const Eigen::MatrixXd m = g * g.transpose();
    bool degenerate = false;
    Eigen::VectorXd inv_sd(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(m(i, i) > 0.0)) {
        degenerate = true;
        break;
      }
      inv_sd(i) = 1.0 / std::sqrt(m(i, i));
    }
    if (degenerate) continue;

    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i * n + i] = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = std::clamp(m(i, j) * inv_sd(i) * inv_sd(j), -1.0, 1.0);
        e[i * n + j] = r;
        e[j * n + i] = r;
      }
    }
    if (!check_correlation(n, e).ok()) continue;
    return CorrelationMatrix(n, std::move(e));
  }
  throw GenerationFailure("random_correlation exhausted its retry budget");
}

}  // namespace varbound
