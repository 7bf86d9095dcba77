#include <cmath>

#include "doctest.h"
#include "varbound/errors.hpp"
#include "varbound/tails.hpp"

using namespace varbound;

TEST_CASE("weighted tail bound") {
  const VarianceProfile p({1.0, 4.0});
  const WeightVector w({0.5, -0.5});
  CHECK(tail_bound_weighted(w, p, 1.0) == doctest::Approx(2.5));
  CHECK(tail_bound_weighted(w, p, 0.5) == doctest::Approx(10.0));
  CHECK(vacuous(tail_bound_weighted(w, p, 1.0)));
  CHECK_FALSE(vacuous(tail_bound_weighted(w, p, 2.0)));
  CHECK_THROWS_AS(tail_bound_weighted(w, p, 0.0), InvalidInput);
  CHECK_THROWS_AS(tail_bound_weighted(w, p, NAN), InvalidInput);
}

TEST_CASE("mean tail bound under both dependence assumptions") {
  const VarianceProfile p({1.0, 2.0, 3.0, 6.0});
  CHECK(tail_bound_mean(p, 1.0, Dependence::Correlated) == doctest::Approx(3.0));
  CHECK(tail_bound_mean(p, 1.0, Dependence::Uncorrelated) == doctest::Approx(0.75));
  CHECK(tail_bound_mean(p, 2.0, Dependence::Correlated) == doctest::Approx(0.75));
}

TEST_CASE("standardized forms") {
  CHECK(tail_bound_standardized(10, 2.0, StandardizedForm::Mean) == 0.25);
  CHECK(tail_bound_standardized(3, 3.0, StandardizedForm::Sum) == 1.0);
  CHECK(tail_bound_standardized(5, 10.0, StandardizedForm::Sum) ==
        tail_bound_standardized(5, 2.0, StandardizedForm::Mean));
  CHECK_THROWS_AS(tail_bound_standardized(0, 1.0, StandardizedForm::Mean), InvalidInput);
}

TEST_CASE("process profile") {
  const auto p = process_profile(ProcessModel::running_mean(0.0, 2.0), 4);
  CHECK(p.size() == 4);
  CHECK(p[0] == doctest::Approx(4.0));
  CHECK(p[3] == doctest::Approx(1.0));
  const auto t = process_profile(ProcessModel::telegraph(1.0), 3);
  CHECK(t[2] == doctest::Approx(0.25));
}

TEST_CASE("empirical tail stays below the bound") {
  const auto tg = ProcessModel::telegraph(1.0);
  const auto profile = process_profile(tg, 10);
  for (double d : {0.1, 0.3, 0.5}) {
    const McEstimate e = empirical_tail(tg, 10, d, 4000, 17);
    CHECK(e.estimate >= 0.0);
    CHECK(e.estimate <= 1.0);
    CHECK(e.estimate <= tail_bound_mean(profile, d, Dependence::Correlated) + 3.0 * e.std_error);
    CHECK(e.count == static_cast<std::size_t>(std::llround(e.estimate * 4000)));
  }
  CHECK(empirical_tail(tg, 10, 0.6, 1000, 3).estimate == 0.0);
}
