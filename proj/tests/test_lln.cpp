#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "varbound/errors.hpp"
#include "varbound/lln.hpp"
#include "varbound/numeric.hpp"

using namespace varbound;

TEST_CASE("running-mean condition 28 converges") {
  const auto rm = ProcessModel::running_mean(0.0, 1.0);
  const auto d = diagnose(rm, LlnCondition::Markov28, full_grid(200));
  CHECK(d.verdict == Verdict::Converging);
  CHECK(d.samples.size() == 200);
  CHECK(d.samples.back().value == doctest::Approx(0.02939015474060723).epsilon(1e-12));
}

TEST_CASE("telegraph condition 28 is constant") {
  const auto tg = ProcessModel::telegraph(1.0);
  const auto d = diagnose(tg, LlnCondition::Markov28, full_grid(200));
  CHECK(d.verdict == Verdict::NotConverging);
  for (const auto& s : d.samples) CHECK(s.value == 0.25);
}

TEST_CASE("condition 25 equals the variance of the mean") {
  for (const auto& p : {ProcessModel::telegraph(0.3), ProcessModel::running_mean(0.0, 1.0)}) {
    const auto d = diagnose(p, LlnCondition::Markov25, full_grid(60));
    for (const auto& s : d.samples) CHECK(s.value == doctest::Approx(var_of_mean(p, s.n)).epsilon(1e-12));
    CHECK(markov25_value(p, 60) == doctest::Approx(var_of_mean(p, 60)).epsilon(1e-12));
  }
}

TEST_CASE("condition 30 dominates condition 28") {
  const auto rm = ProcessModel::running_mean(0.0, 1.0);
  const auto var = variance_sequence(rm);
  for (std::size_t n : {1, 5, 50}) {
    CHECK(theorem8_condition(var, n, 1.0) == doctest::Approx(markov28_value(var, n)));
    CHECK(theorem8_condition(var, n, 2.0) >= markov28_value(var, n));
  }
  CHECK_THROWS_AS(theorem8_condition(var, 5, 0.5), InvalidInput);
  const auto d = diagnose(rm, LlnCondition::PowerMean30, full_grid(200), 2.0);
  CHECK(d.verdict == Verdict::Inconclusive);
  CHECK(d.samples.back().value == doctest::Approx(0.0906).epsilon(1e-2));
  CHECK(diagnose(rm, LlnCondition::PowerMean30, full_grid(200), 2.0, ConvergenceRule{0.1}).verdict ==
        Verdict::Converging);
}

TEST_CASE("power mean") {
  const std::vector<double> v = {1.0, 4.0};
  CHECK(power_mean(v, 1.0) == doctest::Approx(2.5));
  CHECK(power_mean(v, 2.0) == doctest::Approx(std::sqrt(8.5)));
  CHECK(power_mean(std::vector<double>{1e300, 1e300}, 4.0) == doctest::Approx(1e300));
  CHECK(power_mean(std::vector<double>{0.0, 0.0}, 3.0) == 0.0);
  CHECK_THROWS_AS(power_mean(v, 0.0), InvalidInput);
  CHECK_THROWS_AS(power_mean(std::vector<double>{-1.0}, 1.0), InvalidInput);
}

TEST_CASE("power mean is monotone in the exponent") {
  Engine rng = make_engine(12);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> v(1 + k % 9);
    for (auto& x : v) x = u(rng);
    CHECK(power_mean(v, 0.5) <= power_mean(v, 1.0) * (1.0 + 1e-12));
    CHECK(power_mean(v, 1.0) <= power_mean(v, 3.0) * (1.0 + 1e-12));
  }
}

TEST_CASE("scaled variance chain") {
  const auto tg = ProcessModel::telegraph(1.0);
  const auto var = variance_sequence(tg);
  const auto sv = theorem9_scaled_variance(var, 100, 0.5, 1.0);
  CHECK(sv.value == doctest::Approx(25.0 / std::pow(100.0, 2.0)));
  CHECK(sv.bound == doctest::Approx(0.01));
  CHECK(sv.value <= sv.bound);
  CHECK_THROWS_AS(theorem9_scaled_variance(var, 10, 0.5, 0.1), InvalidInput);
  CHECK_THROWS_AS(theorem9_scaled_variance(var, 10, 0.0), InvalidInput);
}

TEST_CASE("harmonic remainder shrinks") {
  CHECK(harmonic_remainder(1) == doctest::Approx(1.0 - kEulerMascheroni));
  CHECK(harmonic_remainder(1000) == doctest::Approx(1.0 / 2000.0).epsilon(1e-3));
  CHECK(harmonic_remainder(1000) < harmonic_remainder(10));
}

TEST_CASE("judge_vanishing") {
  std::vector<LlnSample> down;
  for (std::size_t n = 1; n <= 20; ++n) down.push_back({n, 1.0 / static_cast<double>(n), {}});
  CHECK(judge_vanishing(down, 0.1) == Verdict::Converging);
  CHECK(judge_vanishing(down, 0.01) == Verdict::Inconclusive);
  std::vector<LlnSample> flat;
  for (std::size_t n = 1; n <= 20; ++n) flat.push_back({n, 2.0, {}});
  CHECK(judge_vanishing(flat, 0.1) == Verdict::NotConverging);
  CHECK(judge_vanishing(std::vector<LlnSample>{{1, 0.0, {}}}, 0.1) == Verdict::Inconclusive);
}

TEST_CASE("bounded-growth check on the telegraph signal") {
  const auto tg = ProcessModel::telegraph(1.0);
  const auto r = theorem12_check(tg, full_grid(200), 1.0, 0.5);
  CHECK(r.diagnostic.verdict == Verdict::Converging);
  CHECK_FALSE(r.mean_variance_vanishes);
  CHECK(r.variance_branch == GrowthBranch::BelowCap);
  CHECK(r.covariance_branch == GrowthBranch::BelowCap);
  CHECK(r.rows.back().var_of_mean == doctest::Approx(0.0016390314141836318).epsilon(1e-12));
  CHECK(r.rows.back().mean_covariance == doctest::Approx(0.03912941068741642).epsilon(1e-2));
  CHECK(r.rows.back().var_of_mean < 0.02);
}

TEST_CASE("bounded-growth check rejects linear growth") {
  UserKernel k;
  k.variance = [](std::size_t) { return 1.0; };
  k.covariance = [](std::size_t, std::size_t) { return 1.0; };
  const auto r = theorem12_check(ProcessModel::user_kernel(k), full_grid(200), 1.0, 0.5);
  CHECK(r.covariance_branch == GrowthBranch::Neither);
  CHECK(r.diagnostic.verdict == Verdict::NotConverging);
}

TEST_CASE("bounded-growth check accepts square-root growth") {
  // (1/n) sum_{i<j} Cov grows like sqrt(n)/3.
  UserKernel k;
  k.variance = [](std::size_t) { return 1.0; };
  k.covariance = [](std::size_t i, std::size_t j) {
    return i == j ? 1.0 : 0.5 / std::sqrt(static_cast<double>(std::max(i, j)));
  };
  const auto r = theorem12_check(ProcessModel::user_kernel(k), full_grid(200), 2.0, 0.5);
  CHECK(r.variance_branch == GrowthBranch::BelowCap);
  CHECK(r.covariance_branch == GrowthBranch::SameOrder);
  CHECK(r.diagnostic.verdict == Verdict::Converging);
}

TEST_CASE("grid validation") {
  const auto rm = ProcessModel::running_mean(0.0, 1.0);
  CHECK_THROWS_AS(diagnose(rm, LlnCondition::Markov28, std::vector<std::size_t>{}), InvalidInput);
  CHECK_THROWS_AS(diagnose(rm, LlnCondition::Markov28, std::vector<std::size_t>{3, 2}), InvalidInput);
  CHECK_THROWS_AS(diagnose(rm, LlnCondition::Theorem12, full_grid(5)), InvalidInput);
  CHECK_THROWS_AS(theorem12_check(rm, full_grid(5), 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(theorem12_check(rm, full_grid(5), 0.0, 0.5), InvalidInput);
}
