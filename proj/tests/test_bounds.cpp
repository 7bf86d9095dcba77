#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "varbound/bounds.hpp"
#include "varbound/errors.hpp"
#include "varbound/verify.hpp"

using namespace varbound;

namespace {

CovarianceModel pair_model(double rho) {
  return CovarianceModel(VarianceProfile({1.0, 1.0}), CorrelationMatrix(2, {1.0, rho, rho, 1.0}));
}

}  // namespace

TEST_CASE("two-variable golden examples") {
  CHECK(exact_variance(WeightVector({1.0, 1.0}), pair_model(1.0)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(exact_variance(WeightVector({0.5, 0.5}), pair_model(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_variance(WeightVector({0.5, 1.0 / 3.0}), pair_model(1.0)) ==
        doctest::Approx(25.0 / 36.0).epsilon(1e-12));
  CHECK(exact_variance(WeightVector({1.0, 1.0}), pair_model(-1.0)) == 0.0);
  CHECK(exact_variance(WeightVector({0.5, 0.5}), pair_model(-1.0)) == 0.0);
  CHECK(exact_variance(WeightVector({0.5, 0.5}), pair_model(0.0)) == doctest::Approx(0.5));
}

TEST_CASE("example with full correlation reaches the T5 bound") {
  const BoundReport r = bound_report(WeightVector({1.0, 1.0}), pair_model(1.0));
  CHECK(r.exact == doctest::Approx(4.0));
  const auto& t5 = r.at(BoundTag::T5);
  CHECK(t5.applicable);
  CHECK(t5.value == doctest::Approx(4.0));
  CHECK(std::abs(t5.slack) < 1e-12);
  CHECK_FALSE(r.at(BoundTag::T1).applicable);
  CHECK(r.at(BoundTag::T1).value == doctest::Approx(2.0));
  CHECK(r.at(BoundTag::T4).applicable);
  CHECK(r.ok());
}

TEST_CASE("individual bounds and their hypotheses") {
  const VarianceProfile p({1.0, 4.0, 9.0});
  const WeightVector simplex({0.2, 0.3, 0.5});
  CHECK(bound_theorem1(simplex, p) == doctest::Approx(0.2 + 1.2 + 4.5));
  CHECK(bound_theorem1prime(simplex, p) == doctest::Approx((0.04 + 0.09 + 0.25) * 14.0));
  CHECK(bound_theorem4(simplex, p) == doctest::Approx(5.9));
  CHECK(bound_theorem5(WeightVector({-0.2, 0.3, 0.5}), p) == doctest::Approx(5.9));
  CHECK_THROWS_AS(bound_theorem1(WeightVector({1.0, 1.0, 1.0}), p), NotApplicable);
  CHECK_THROWS_AS(bound_theorem1prime(WeightVector({0.2, 0.3, 0.4}), p), NotApplicable);
  CHECK_THROWS_AS(bound_theorem4(WeightVector({-0.2, 0.3, 0.5}), p), NotApplicable);
  CHECK_THROWS_AS(bound_theorem5(WeightVector({1.0, 1.0}), p), InvalidInput);
}

TEST_CASE("applicability follows the weight class") {
  const CovarianceModel m(VarianceProfile({1.0, 2.0, 3.0}), CorrelationMatrix::identity(3));
  const BoundReport simplex = bound_report(WeightVector({0.2, 0.3, 0.5}), m);
  CHECK(simplex.at(BoundTag::T1).applicable);
  CHECK(simplex.at(BoundTag::T1prime).applicable);
  CHECK_FALSE(simplex.at(BoundTag::T3).applicable);
  CHECK(simplex.at(BoundTag::C2chain).applicable);
  CHECK(simplex.at(BoundTag::C3chain).applicable);

  const BoundReport sub = bound_report(WeightVector({0.2, 0.3, 0.1}), m);
  CHECK(sub.at(BoundTag::T3).applicable);
  CHECK_FALSE(sub.at(BoundTag::T1prime).applicable);

  const BoundReport general = bound_report(WeightVector({-2.0, 0.3, 0.1}), m);
  CHECK_FALSE(general.at(BoundTag::T4).applicable);
  CHECK(general.at(BoundTag::T5).applicable);
  CHECK_FALSE(general.at(BoundTag::C2chain).applicable);
  CHECK_FALSE(general.at(BoundTag::C3chain).applicable);
}

TEST_CASE("exact variance matches a long double quadratic form") {
  for (std::uint64_t k = 0; k < 300; ++k) {
    Engine rng = make_engine(derive_seed(5, k));
    const std::size_t n = gen::uniform_size(1, 9, rng);
    const auto a = gen::uniform_vector(n, -3.0, 3.0, rng);
    const auto v = gen::uniform_vector(n, 0.0, 10.0, rng);
    const auto c = random_correlation(n, k);
    std::vector<std::vector<double>> rho(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) rho[i][j] = c(i, j);
    }
    const double got = exact_variance(WeightVector(a), CovarianceModel(VarianceProfile(v), c));
    const long double want = oracle::quadratic_form(a, v, rho);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i]) * std::sqrt(v[i]);
    CHECK(std::abs(got - static_cast<double>(want)) <= 1e-12 * std::max(1.0, scale * scale));
  }
}

TEST_CASE("chains are ordered") {
  const CovarianceModel m(VarianceProfile({2.0, 5.0, 1.0}), CorrelationMatrix::identity(3));
  const BoundReport r = bound_report(WeightVector({0.3, -0.2, 0.4}), m);
  const auto& c2 = r.at(BoundTag::C2chain);
  REQUIRE(c2.chain.size() == 3);
  CHECK(c2.chain[0] <= c2.chain[1]);
  CHECK(c2.chain[1] <= c2.chain[2]);
  const auto& c3 = r.at(BoundTag::C3chain);
  REQUIRE(c3.chain.size() == 3);
  CHECK(c3.chain[0] == doctest::Approx(r.exact));
  CHECK(r.ok());
}

TEST_CASE("hypothetical correlation skips dominance checks") {
  const std::vector<double> bad = {1.0, 0.9, -0.9, 0.9, 1.0, 0.9, -0.9, 0.9, 1.0};
  const CovarianceModel m(VarianceProfile({1.0, 1.0, 1.0}),
                          CorrelationMatrix(3, bad, CorrelationMatrix::Psd::AllowHypothetical));
  const BoundReport r = bound_report(WeightVector({1.0, -1.0, 1.0}), m);
  CHECK(r.hypothetical);
  CHECK(r.ok());
}

TEST_CASE("principal minor closed form") {
  const WeightVector w({0.1, 0.2, 0.3, 0.4});
  const std::vector<std::size_t> all = {0, 1, 2, 3};
  CHECK(std::abs(principal_minor(w, all)) < 1e-15);
  const std::vector<std::size_t> two = {1, 3};
  CHECK(principal_minor(w, two) == doctest::Approx(0.2 * 0.4 * 0.4));
  const auto a = weight_gram_complement(w);
  CHECK(principal_minor_direct(a, two) == doctest::Approx(0.2 * 0.4 * 0.4));
  const std::vector<std::size_t> unsorted = {3, 1};
  CHECK_THROWS_AS(principal_minor(w, unsorted), InvalidInput);
  const std::vector<std::size_t> out_of_range = {4};
  CHECK_THROWS_AS(principal_minor(w, out_of_range), InvalidInput);
}

TEST_CASE("principal minors against Gaussian elimination") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    Engine rng = make_engine(derive_seed(8, k));
    const std::size_t n = gen::uniform_size(2, 8, rng);
    const auto alpha = gen::simplex_weights(n, rng);
    const WeightVector w(alpha);
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1U << i)) s.push_back(i);
      }
      std::vector<std::vector<long double>> m(s.size(), std::vector<long double>(s.size()));
      long double prod = 1.0L;
      for (std::size_t r = 0; r < s.size(); ++r) {
        prod *= alpha[s[r]];
        for (std::size_t c = 0; c < s.size(); ++c) {
          m[r][c] = (r == c ? alpha[s[r]] : 0.0L) - static_cast<long double>(alpha[s[r]]) * alpha[s[c]];
        }
      }
      const long double det = oracle::determinant(m);
      CHECK(std::fabs(principal_minor(w, s) - det) <= 1e-10L * std::max(std::fabs(det), prod));
    }
  }
}

TEST_CASE("PSD check of A") {
  const PsdVerdict yes = check_A_psd(WeightVector({0.2, 0.3, 0.5}));
  CHECK(yes.psd);
  CHECK(yes.method == PsdVerdict::Method::ExhaustiveMinors);
  CHECK(yes.minor_formula_consistent);

  const PsdVerdict no = check_A_psd(WeightVector({0.6, 0.6}));
  CHECK_FALSE(no.psd);
  CHECK(no.witness_subset == std::vector<std::size_t>{0, 1});
  CHECK(no.worst_value == doctest::Approx(0.36 * -0.2));

  std::vector<double> big(20, 0.05);
  const PsdVerdict eig = check_A_psd(WeightVector(big));
  CHECK(eig.psd);
  CHECK(eig.method == PsdVerdict::Method::Eigenvalue);
  big[0] = 0.5;
  const PsdVerdict eig_no = check_A_psd(WeightVector(big));
  CHECK_FALSE(eig_no.psd);
  CHECK(eig_no.witness_vector.size() == 20);
}

TEST_CASE("covariance sum sandwich") {
  const CovarianceModel indep(VarianceProfile({1.0, 2.0, 3.0}), CorrelationMatrix::identity(3));
  const auto b = covariance_sum_bounds(indep);
  CHECK(b.lower == doctest::Approx(-2.0));
  CHECK(b.upper == doctest::Approx(4.0));
  CHECK(b.actual == 0.0);
  CHECK(b.holds);

  const CovarianceModel full(VarianceProfile({1.0, 1.0}), CorrelationMatrix(2, {1.0, 1.0, 1.0, 1.0}));
  CHECK(covariance_sum_bounds(full).actual == doctest::Approx(covariance_sum_bounds(full).upper));
  const CovarianceModel anti(VarianceProfile({1.0, 1.0}), CorrelationMatrix(2, {1.0, -1.0, -1.0, 1.0}));
  CHECK(covariance_sum_bounds(anti).actual == doctest::Approx(covariance_sum_bounds(anti).lower));
  CHECK_THROWS_AS(covariance_sum_bounds(CovarianceModel(VarianceProfile({1.0}), CorrelationMatrix::identity(1))),
                  InvalidInput);
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(exact_variance(WeightVector({0.5, 0.5}), CovarianceModel(VarianceProfile({1.0}),
                                                                           CorrelationMatrix::identity(1))),
                  InvalidInput);
}
