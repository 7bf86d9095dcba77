#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "varbound/errors.hpp"
#include "varbound/numeric.hpp"
#include "varbound/processes.hpp"

using namespace varbound;

TEST_CASE("running-mean kernel") {
  const auto p = ProcessModel::running_mean(1.5, 2.0);
  CHECK(kernel_cov(p, 2, 5) == doctest::Approx(0.8));
  CHECK(kernel_cov(p, 5, 2) == kernel_cov(p, 2, 5));
  CHECK(p.variance(4) == doctest::Approx(1.0));
  CHECK(p.mean(7) == 1.5);
  CHECK(p.name() == "running-mean");
  CHECK_THROWS_AS(kernel_cov(p, 0, 1), InvalidInput);
  CHECK_THROWS_AS(ProcessModel::running_mean(0.0, 0.0), InvalidInput);
}

TEST_CASE("telegraph kernel") {
  const auto p = ProcessModel::telegraph(1.0);
  CHECK(kernel_cov(p, 3, 3) == 0.25);
  CHECK(kernel_cov(p, 1, 2) == doctest::Approx(0.033833820809153176).epsilon(1e-14));
  CHECK(kernel_cov(p, 4, 2) == doctest::Approx(0.004578909722183545).epsilon(1e-14));
  CHECK(p.mean(1) == 0.5);
  CHECK_THROWS_AS(ProcessModel::telegraph(-1.0), InvalidInput);
  CHECK_THROWS_AS(ProcessModel::telegraph(1.0, 1.0), InvalidInput);
}

TEST_CASE("closed forms against the kernel double sum") {
  for (double sigma : {0.5, 1.0, 3.0}) {
    for (std::size_t n : {1, 2, 7, 40, 100}) {
      const auto p = ProcessModel::running_mean(0.0, sigma);
      CHECK(running_mean_var_of_mean(sigma, n) ==
            doctest::Approx(static_cast<double>(oracle::var_of_mean(p, n))).epsilon(1e-12));
    }
  }
  for (double lambda : {0.05, 1.0, 4.0}) {
    for (double prob : {0.5, 0.2}) {
      for (std::size_t n : {1, 2, 7, 40, 100}) {
        const auto p = ProcessModel::telegraph(lambda, prob);
        CHECK(telegraph_var_of_mean(lambda, n, prob) ==
              doctest::Approx(static_cast<double>(oracle::var_of_mean(p, n))).epsilon(1e-12));
      }
    }
  }
  CHECK(telegraph_var_of_mean(1.0, 200) == doctest::Approx(0.0016390314141836318).epsilon(1e-13));
}

TEST_CASE("user kernel") {
  UserKernel k;
  k.variance = [](std::size_t) { return 1.0; };
  k.covariance = [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.5; };
  const auto p = ProcessModel::user_kernel(k);
  CHECK_FALSE(p.sampleable());
  CHECK(var_of_mean(p, 4) == doctest::Approx((4.0 + 12.0 * 0.5) / 16.0));
  CHECK_THROWS_AS(p.mean(1), InvalidInput);

  UserKernel bad = k;
  bad.covariance = [](std::size_t i, std::size_t j) { return i < j ? 0.5 : (i == j ? 1.0 : 0.4); };
  CHECK_THROWS_AS(kernel_cov(ProcessModel::user_kernel(bad), 1, 2), InvalidModel);
  UserKernel diag = k;
  diag.covariance = [](std::size_t, std::size_t) { return 0.5; };
  CHECK_THROWS_AS(kernel_cov(ProcessModel::user_kernel(diag), 2, 2), InvalidModel);
}

TEST_CASE("flip probability") {
  CHECK(telegraph_flip_probability(1.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-15));
  CHECK(telegraph_flip_probability(50.0) == doctest::Approx(0.5));
  CHECK(telegraph_flip_probability(1e-9) == doctest::Approx(1e-9).epsilon(1e-6));
}

TEST_CASE("sample paths are seeded and well formed") {
  const auto a = sample_telegraph(1.0, 0.5, 50, 9);
  const auto b = sample_telegraph(1.0, 0.5, 50, 9);
  const auto c = sample_telegraph(1.0, 0.5, 50, 10);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (double x : a.values) CHECK((x == 0.0 || x == 1.0));
  const auto r = sample_running_mean(0.0, 1.0, 30, 4);
  CHECK(r.values.size() == 30);
  CHECK(sample_path(ProcessModel::running_mean(0.0, 1.0), 30, 4).values == r.values);
}

TEST_CASE("statistic parsing") {
  CHECK(Statistic::parse("mean_n").kind == Statistic::Kind::MeanN);
  CHECK(Statistic::parse("var_of_mean_n").kind == Statistic::Kind::VarOfMeanN);
  const auto cov = Statistic::parse("cov(2, 5)");
  CHECK(cov.kind == Statistic::Kind::Cov);
  CHECK(cov.i == 2);
  CHECK(cov.j == 5);
  CHECK(cov.label() == "cov(2,5)");
  CHECK(Statistic::parse("tail(0.25)").delta == 0.25);
  CHECK_THROWS_AS(Statistic::parse("median"), InvalidInput);
}

TEST_CASE("Monte Carlo contracts") {
  const auto tg = ProcessModel::telegraph(1.0);
  const McEstimate one = mc_estimate(tg, Statistic::var_of_mean_n(), 15, 2000, 21, 1);
  const McEstimate three = mc_estimate(tg, Statistic::var_of_mean_n(), 15, 2000, 21, 3);
  CHECK(one.estimate == three.estimate);
  CHECK(one.std_error == three.std_error);
  CHECK(one.reps == 2000);
  CHECK_THROWS_AS(mc_estimate(tg, Statistic::mean_n(), 5, 99, 1), InvalidInput);
  CHECK_THROWS_AS(mc_estimate(tg, Statistic::cov(1, 6), 5, 100, 1), InvalidInput);
  UserKernel k;
  k.variance = [](std::size_t) { return 1.0; };
  k.covariance = [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; };
  CHECK_THROWS_AS(mc_estimate(ProcessModel::user_kernel(k), Statistic::mean_n(), 5, 100, 1), InvalidInput);

  const auto t1 = mc_estimate(tg, Statistic::mean_n(), 1, 100, 1);
  CHECK(t1.estimate >= 0.0);
  CHECK(t1.estimate <= 1.0);
}

TEST_CASE("closed form lookup") {
  const auto rm = ProcessModel::running_mean(2.0, 1.0);
  CHECK(*closed_form(rm, Statistic::mean_n(), 5) == 2.0);
  CHECK(*closed_form(rm, Statistic::cov(2, 5), 5) == doctest::Approx(0.2));
  CHECK(*closed_form(rm, Statistic::var_of_mean_n(), 20) == doctest::Approx(running_mean_var_of_mean(1.0, 20)));
  CHECK_FALSE(closed_form(rm, Statistic::tail(0.1), 5).has_value());
}

TEST_CASE("numeric helpers") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12.0));
  CHECK(harmonic_number(200) / 200.0 == doctest::Approx(0.02939015474060723).epsilon(1e-14));
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
