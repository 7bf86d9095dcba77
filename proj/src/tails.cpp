#include "varbound/tails.hpp"

#include <cmath>

#include "varbound/bounds.hpp"
#include "varbound/errors.hpp"

namespace varbound {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("delta must be finite and > 0");
}

}  // namespace

double tail_bound_weighted(const WeightVector& weights, const VarianceProfile& profile, double delta) {
  require_delta(delta);
  return bound_theorem5(weights, profile) / (delta * delta);
}

double tail_bound_mean(const VarianceProfile& profile, double delta, Dependence dependence) {
  require_delta(delta);
  if (profile.size() == 0) throw InvalidInput("variance profile is empty");
  const double n = static_cast<double>(profile.size());
  const double correlated = profile.total() / n / (delta * delta);
  return dependence == Dependence::Correlated ? correlated : correlated / n;
}

double tail_bound_standardized(std::size_t n, double delta, StandardizedForm form) {
  require_delta(delta);
  if (n < 1) throw InvalidInput("n must be >= 1");
  const double nd = static_cast<double>(n);
  return form == StandardizedForm::Mean ? 1.0 / (delta * delta) : nd * nd / (delta * delta);
}

McEstimate empirical_tail(const ProcessModel& process, std::size_t n, double delta, std::size_t reps,
                          std::uint64_t seed, unsigned workers) {
  require_delta(delta);
  return mc_estimate(process, Statistic::tail(delta), n, reps, seed, workers);
}

VarianceProfile process_profile(const ProcessModel& process, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) v[i - 1] = process.variance(i);
  return VarianceProfile(std::move(v));
}

}  // namespace varbound
