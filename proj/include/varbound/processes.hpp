#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace varbound {

/// S_k = (1/k) sum_{m<=k} X_m over iid Normal(mu, sigma^2) draws.
/// Cov(S_i, S_j) = sigma^2 / max(i, j).
struct RunningMeanNormal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Random telegraph signal sampled at integer times. Flips occur at rate
/// 2*lambda*p (0 -> 1) and 2*lambda*(1-p) (1 -> 0); for p = 1/2 the flip count
/// over a unit interval is Poisson(lambda). Cov(X_i, X_j) = p(1-p) e^{-2 lambda |i-j|}.
struct Telegraph {
  double lambda = 1.0;
  double p = 0.5;
};

/// Arbitrary second-moment kernel over time indices i, j >= 1. Not sampleable.
struct UserKernel {
  std::function<double(std::size_t)> variance;
  std::function<double(std::size_t, std::size_t)> covariance;
  std::function<double(std::size_t)> mean;  // optional
};

class ProcessModel {
 public:
  using Variant = std::variant<RunningMeanNormal, Telegraph, UserKernel>;

  static ProcessModel running_mean(double mu, double sigma);
  static ProcessModel telegraph(double lambda, double p = 0.5);
  static ProcessModel user_kernel(UserKernel kernel);

  const Variant& variant() const { return variant_; }
  std::string name() const;
  bool sampleable() const;

  /// Var(X_i), i >= 1.
  double variance(std::size_t i) const;
  /// E X_i, i >= 1. Throws InvalidInput for kernels without a mean.
  double mean(std::size_t i) const;

 private:
  explicit ProcessModel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Closed-form Cov(X_i, X_j) for time indices i, j >= 1.
double kernel_cov(const ProcessModel& process, std::size_t i, std::size_t j);

/// Var((1/n) sum S_i) = (2 n sigma^2 - sigma^2 H_n) / n^2.
double running_mean_var_of_mean(double sigma, std::size_t n);

/// Var((1/n) sum X_k) for the telegraph signal:
/// c/n [1 + 2 (q - q^n)/(1 - q) - (2/n) sum_{k<n} k q^k], q = e^{-2 lambda}, c = p(1-p).
double telegraph_var_of_mean(double lambda, std::size_t n, double p = 0.5);

/// Probability of an odd Poisson(lambda) count, (1 - e^{-2 lambda}) / 2.
double telegraph_flip_probability(double lambda);

/// Variance of the mean of the first n variables: closed form where one
/// exists, otherwise the kernel double sum.
double var_of_mean(const ProcessModel& process, std::size_t n);

struct SamplePath {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string process;
};

SamplePath sample_running_mean(double mu, double sigma, std::size_t n, std::uint64_t seed);
SamplePath sample_telegraph(double lambda, double p, std::size_t n, std::uint64_t seed);
SamplePath sample_path(const ProcessModel& process, std::size_t n, std::uint64_t seed);

/// Statistic estimated by mc_estimate. Indices of Cov are 1-based time indices.
struct Statistic {
  enum class Kind { MeanN, VarOfMeanN, Cov, Tail };

  Kind kind = Kind::MeanN;
  std::size_t i = 0;
  std::size_t j = 0;
  double delta = 0.0;

  static Statistic mean_n() { return {Kind::MeanN, 0, 0, 0.0}; }
  static Statistic var_of_mean_n() { return {Kind::VarOfMeanN, 0, 0, 0.0}; }
  static Statistic cov(std::size_t i, std::size_t j) { return {Kind::Cov, i, j, 0.0}; }
  static Statistic tail(double delta) { return {Kind::Tail, 0, 0, delta}; }

  /// Accepts mean_n, var_of_mean_n, cov(i,j), tail(delta).
  static Statistic parse(const std::string& text);
  std::string label() const;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::size_t count = 0;  // exceedances, tail statistic only
};

inline constexpr std::size_t kMinReplicates = 100;

/// Monte Carlo estimate over `reps` paths; replicate r uses derive_seed(seed, r),
/// so the result does not depend on `workers`.
McEstimate mc_estimate(const ProcessModel& process, const Statistic& statistic, std::size_t n,
                       std::size_t reps, std::uint64_t seed, unsigned workers = 1);

/// Exact value of the statistic where one exists (none for tail).
std::optional<double> closed_form(const ProcessModel& process, const Statistic& statistic, std::size_t n);

}  // namespace varbound
