#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace varbound {

/// Fixed-order pairwise summation. The result depends only on the input
/// order, never on how the input was produced.
double pairwise_sum(std::span<const double> values);

/// n-th harmonic number, summed from the small terms upward.
double harmonic_number(std::size_t n);

inline constexpr double kEulerMascheroni = 0.57721566490153286061;

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replicate `stream` under master seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Engine = std::mt19937_64;

Engine make_engine(std::uint64_t seed);

}  // namespace varbound
