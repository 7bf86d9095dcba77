#pragma once

#include <cstddef>
#include <cstdint>

#include "varbound/model.hpp"
#include "varbound/processes.hpp"

namespace varbound {

/// Chebyshev bounds on P(|statistic - E statistic| > delta). None of them
/// is clamped to 1; values above 1 are vacuous.

/// (sum |a_i|)(sum |a_i| s_i^2) / delta^2 for the weighted sum.
double tail_bound_weighted(const WeightVector& weights, const VarianceProfile& profile, double delta);

enum class Dependence { Correlated, Uncorrelated };

/// Bound for the sample mean: (1/delta^2)(1/n) sum s_i^2 under arbitrary
/// correlation, and that value divided by n when uncorrelated.
double tail_bound_mean(const VarianceProfile& profile, double delta, Dependence dependence);

enum class StandardizedForm { Mean, Sum };

/// Standardized variables: 1/delta^2 for the mean, n^2/delta^2 for the sum.
double tail_bound_standardized(std::size_t n, double delta, StandardizedForm form);

inline bool vacuous(double bound) { return bound > 1.0; }

/// Fraction of `reps` simulated paths whose mean deviates from its
/// expectation by strictly more than delta, with its binomial standard error.
McEstimate empirical_tail(const ProcessModel& process, std::size_t n, double delta, std::size_t reps,
                          std::uint64_t seed, unsigned workers = 1);

/// Variances Var(X_1..X_n) of a process as a profile.
VarianceProfile process_profile(const ProcessModel& process, std::size_t n);

}  // namespace varbound
