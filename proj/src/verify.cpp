#include "varbound/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "varbound/bounds.hpp"
#include "varbound/errors.hpp"
#include "varbound/lln.hpp"
#include "varbound/processes.hpp"
#include "varbound/table1.hpp"
#include "varbound/tails.hpp"

namespace varbound {

namespace gen {

std::vector<double> simplex_weights(std::size_t n, Engine& rng) {
  std::exponential_distribution<double> expo(1.0);
  for (;;) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
      x = expo(rng);
      total += x;
    }
    for (auto& x : w) x /= total;
    if (classify_weights(w).weight_class() == WeightClass::Simplex) return w;
  }
}

std::vector<double> sub_simplex_weights(std::size_t n, Engine& rng) {
  std::uniform_real_distribution<double> shrink(0.05, 0.95);
  auto w = simplex_weights(n, rng);
  const double c = shrink(rng);
  for (auto& x : w) x *= c;
  return w;
}

std::vector<double> uniform_vector(std::size_t n, double lo, double hi, Engine& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::size_t uniform_size(std::size_t lo, std::size_t hi, Engine& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace gen

std::string format_check(const CheckResult& c) {
  return fmt::format("{} [{}] {} ({:.2f} s): {}", c.passed ? "PASS" : "FAIL", c.id, c.title, c.seconds, c.detail);
}

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

CheckResult timed(std::string id, std::string title, const std::function<Outcome()>& body) {
  CheckResult r{std::move(id), std::move(title), false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = body();
    r.passed = o.passed;
    r.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
}

// ---------------------------------------------------------------------------
// Oracles, independent of the library's computation paths.

/// Determinant by Gaussian elimination with partial pivoting in long double.
long double oracle_determinant(std::vector<std::vector<long double>> m) {
  const std::size_t k = m.size();
  long double det = 1.0L;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    }
    if (m[p][c] == 0.0L) return 0.0L;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

/// (1/n^2) sum_{i,j} kernel(i, j), accumulated in long double.
long double oracle_double_sum(const ProcessModel& p, std::size_t n) {
  long double s = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) s += kernel_cov(p, i, j);
  }
  const long double nd = static_cast<long double>(n);
  return s / (nd * nd);
}

long double oracle_harmonic(std::size_t n) {
  long double h = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0L / static_cast<long double>(i);
  return h;
}

CovarianceModel random_model(std::size_t n, Engine& rng, std::uint64_t corr_seed) {
  return CovarianceModel(VarianceProfile(gen::uniform_vector(n, 0.0, 10.0, rng)), random_correlation(n, corr_seed));
}

CovarianceModel two_variable_model(double rho) {
  return CovarianceModel(VarianceProfile({1.0, 1.0}), CorrelationMatrix(2, {1.0, rho, rho, 1.0}));
}

// ---------------------------------------------------------------------------
// Acceptance criteria.

CheckResult criterion_table1(int id, std::size_t n, std::uint64_t total, std::uint64_t violations, double limit,
                             unsigned workers) {
  return timed(fmt::format("AC{}", id), fmt::format("Reference grid row, n={}", n), [=] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Table1Row row = run_table1(n, Table1Method::FloatResidual, workers);
    const double secs = seconds_since(t0);
    o.require(row.total == total, fmt::format("total {} == {}", row.total, total));
    o.require(row.violations == violations, fmt::format("violations {} == {}", row.violations, violations));
    o.require(secs < limit, fmt::format("runtime {:.3f} s < {} s", secs, limit));
    o.note(fmt::format("float route {},{},{},{} in {:.3f} s", row.n, row.total, row.violations,
                       format_ratio_percent(row.ratio_percent), secs));
    const Table1Row exact = run_table1(n, Table1Method::Exact, workers);
    o.note(fmt::format("exact-integer route {},{},{},{}", exact.n, exact.total, exact.violations,
                       format_ratio_percent(exact.ratio_percent)));
    return o;
  });
}

CheckResult criterion_table1_n4(unsigned workers) {
  return timed("AC3", "Grid-derived total, n=4", [=] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Table1Row row = run_table1(4, Table1Method::Exact, workers);
    const double secs = seconds_since(t0);
    o.require(row.total == 13440000ULL, fmt::format("total {} == 13440000", row.total));
    o.require(row.weight_tuples == 84, fmt::format("{} compositions == 84", row.weight_tuples));
    o.require(row.ratio_percent >= 5.0 && row.ratio_percent <= 7.0,
              fmt::format("ratio {:.4f}% in [5, 7]", row.ratio_percent));
    o.require(row.note.find("13760000") != std::string::npos, "discrepancy note mentions 13760000");
    o.require(secs < 60.0, fmt::format("runtime {:.3f} s < 60 s", secs));
    o.note(fmt::format("exact route 4,{},{},{:.4f} in {:.3f} s", row.total, row.violations, row.ratio_percent, secs));
    const Table1Row replica = run_table1(4, Table1Method::FloatResidual, workers);
    o.note(fmt::format("float route 4,{},{},{}", replica.total, replica.violations,
                       format_ratio_percent(replica.ratio_percent)));
    o.note("note: " + row.note);
    return o;
  });
}

CheckResult criterion_golden() {
  return timed("AC4", "Golden examples", [] {
    Outcome o;
    struct Case {
      const char* name;
      std::vector<double> weights;
      double rho;
      double exact;
      std::optional<double> weighted;  // sum a_i Var(X_i)
    };
    const std::vector<Case> cases = {
        {"rho=1, a=(1,1)", {1.0, 1.0}, 1.0, 4.0, 2.0},
        {"rho=1, a=(1/2,1/2)", {0.5, 0.5}, 1.0, 1.0, 1.0},
        {"rho=1, a=(1/2,1/3)", {0.5, 1.0 / 3.0}, 1.0, 25.0 / 36.0, 5.0 / 6.0},
        {"rho=-1, a=(1,1)", {1.0, 1.0}, -1.0, 0.0, std::nullopt},
        {"rho=-1, a=(1/2,1/2)", {0.5, 0.5}, -1.0, 0.0, std::nullopt},
        {"rho=0, a=(1/2,1/2)", {0.5, 0.5}, 0.0, 0.5, std::nullopt},
    };
    for (const auto& c : cases) {
      const BoundReport r = bound_report(WeightVector(c.weights), two_variable_model(c.rho));
      o.require(std::abs(r.exact - c.exact) <= 1e-12, fmt::format("{}: exact {:.15g} == {:.15g}", c.name, r.exact, c.exact));
      if (c.weighted) {
        const double v = r.at(BoundTag::T1).value;
        o.require(std::abs(v - *c.weighted) <= 1e-12, fmt::format("{}: sum a Var {:.15g} == {:.15g}", c.name, v, *c.weighted));
      }
      o.require(r.ok(), fmt::format("{}: report has no violations", c.name));
    }
    o.note(fmt::format("{} fixtures", cases.size()));
    return o;
  });
}

CheckResult criterion_dominance(unsigned) {
  return timed("AC5", "Bound dominance property suite", [] {
    Outcome o;
    constexpr std::size_t kInstances = 1000;
    struct Suite {
      const char* name;
      BoundTag tag;
      std::uint64_t seed;
    };
    const Suite suites[] = {{"T1", BoundTag::T1, 101}, {"T1prime", BoundTag::T1prime, 102},
                            {"T3", BoundTag::T3, 103},  {"T4", BoundTag::T4, 104},
                            {"T5", BoundTag::T5, 105}};
    for (const auto& s : suites) {
      std::size_t violations = 0;
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < kInstances; ++k) {
        Engine rng = make_engine(derive_seed(s.seed, k));
        const std::size_t n = gen::uniform_size(2, 8, rng);
        std::vector<double> w;
        switch (s.tag) {
          case BoundTag::T1:
          case BoundTag::T1prime: w = gen::simplex_weights(n, rng); break;
          case BoundTag::T3: w = gen::sub_simplex_weights(n, rng); break;
          case BoundTag::T4: w = gen::uniform_vector(n, 0.0, 3.0, rng); break;
          default: w = gen::uniform_vector(n, -3.0, 3.0, rng); break;
        }
        const WeightVector weights(std::move(w));
        const CovarianceModel model = random_model(n, rng, derive_seed(s.seed + 1000, k));
        const BoundReport r = bound_report(weights, model);
        const BoundEntry& e = r.at(s.tag);
        if (!e.applicable) {
          ++violations;
          continue;
        }
        const double rel = e.slack / std::max(1.0, r.exact);
        worst = std::min(worst, rel);
        if (e.slack < -1e-9 * std::max(1.0, r.exact) || !r.ok()) ++violations;
      }
      o.require(violations == 0, fmt::format("{}: {} violations", s.name, violations));
      o.note(fmt::format("{}: 0/{} violations, min relative slack {:.3g}", s.name, kInstances, worst));
    }
    return o;
  });
}

CheckResult criterion_minors() {
  return timed("AC6", "Minor-formula oracle and PSD of A", [] {
    Outcome o;
    std::size_t subsets = 0;
    double worst = 0.0;
    std::size_t psd_checked = 0;
    for (std::size_t k = 0; k < 200; ++k) {
      Engine rng = make_engine(derive_seed(606, k));
      const std::size_t n = gen::uniform_size(2, 12, rng);
      const auto alpha = gen::simplex_weights(n, rng);
      const WeightVector w(alpha);
      for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        if (std::popcount(mask) > 5) continue;
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (1U << i)) subset.push_back(i);
        }
        std::vector<std::vector<long double>> m(subset.size(), std::vector<long double>(subset.size()));
        long double scale = 1.0L;
        for (std::size_t r = 0; r < subset.size(); ++r) {
          const long double ar = alpha[subset[r]];
          scale *= ar;
          for (std::size_t c = 0; c < subset.size(); ++c) {
            const long double ac = alpha[subset[c]];
            m[r][c] = (r == c ? ar : 0.0L) - ar * ac;
          }
        }
        const long double det = oracle_determinant(std::move(m));
        const double closed = principal_minor(w, subset);
        const long double denom = std::max(std::fabs(det), scale);
        const double rel = static_cast<double>(std::fabs(static_cast<long double>(closed) - det) / denom);
        worst = std::max(worst, rel);
        ++subsets;
      }
      const PsdVerdict simplex = check_A_psd(w);
      o.require(simplex.psd && simplex.method == PsdVerdict::Method::ExhaustiveMinors,
                fmt::format("simplex weights #{} PSD by exhaustive minors", k));
      o.require(simplex.minor_formula_consistent, fmt::format("internal cross-check #{}", k));
      auto shrunk = alpha;
      const double c = 0.1 + 0.8 * static_cast<double>(k) / 200.0;
      for (auto& x : shrunk) x *= c;
      const WeightVector sub(shrunk);
      o.require(sub.weight_class() == WeightClass::SubSimplex, "shrunk weights are sub-simplex");
      o.require(check_A_psd(sub).psd, fmt::format("sub-simplex weights #{} PSD", k));
      psd_checked += 2;
    }
    o.require(worst <= 1e-10, fmt::format("max relative discrepancy {:.3g} <= 1e-10", worst));
    o.note(fmt::format("{} subsets, max relative discrepancy {:.3g}; {} weight vectors PSD", subsets, worst,
                       psd_checked));
    return o;
  });
}

CheckResult criterion_triangle() {
  return timed("AC7", "Closed-form / brute-force triangle", [] {
    Outcome o;
    double worst = 0.0;
    std::size_t cases = 0;
    for (double sigma : {0.5, 1.0, 2.0}) {
      const auto p = ProcessModel::running_mean(0.0, sigma);
      for (std::size_t n = 1; n <= 100; ++n) {
        const long double oracle = oracle_double_sum(p, n);
        const double closed = running_mean_var_of_mean(sigma, n);
        const double rel = static_cast<double>(std::fabs(closed - oracle) / oracle);
        worst = std::max(worst, rel);
        o.require(rel <= 1e-12, fmt::format("running-mean sigma={} n={} rel {:.3g}", sigma, n, rel));
        ++cases;
      }
    }
    for (double lambda : {0.1, 1.0, 5.0}) {
      const auto p = ProcessModel::telegraph(lambda);
      for (std::size_t n = 1; n <= 100; ++n) {
        const long double oracle = oracle_double_sum(p, n);
        const double closed = telegraph_var_of_mean(lambda, n);
        const double rel = static_cast<double>(std::fabs(closed - oracle) / oracle);
        worst = std::max(worst, rel);
        o.require(rel <= 1e-12, fmt::format("telegraph lambda={} n={} rel {:.3g}", lambda, n, rel));
        ++cases;
      }
    }
    o.note(fmt::format("{} cases, max relative error {:.3g}", cases, worst));
    return o;
  });
}

CheckResult criterion_monte_carlo(unsigned workers) {
  return timed("AC8", "Monte Carlo agreement", [=] {
    Outcome o;
    constexpr std::size_t kReps = 100000;
    constexpr std::uint64_t kSeed = 20240801;
    struct Run {
      const char* name;
      ProcessModel process;
      Statistic stat;
      std::size_t n;
      double target;
    };
    const std::vector<Run> runs = {
        {"telegraph(1) var_of_mean_n n=20", ProcessModel::telegraph(1.0), Statistic::var_of_mean_n(), 20,
         telegraph_var_of_mean(1.0, 20)},
        {"running-mean(1) var_of_mean_n n=20", ProcessModel::running_mean(0.0, 1.0), Statistic::var_of_mean_n(), 20,
         running_mean_var_of_mean(1.0, 20)},
        {"running-mean(1) cov(2,5)", ProcessModel::running_mean(0.0, 1.0), Statistic::cov(2, 5), 5, 0.2},
        {"telegraph(1) mean_n n=20", ProcessModel::telegraph(1.0), Statistic::mean_n(), 20, 0.5},
    };
    for (const auto& r : runs) {
      const auto t0 = std::chrono::steady_clock::now();
      const McEstimate e = mc_estimate(r.process, r.stat, r.n, kReps, kSeed, workers);
      const double secs = seconds_since(t0);
      const double z = (e.estimate - r.target) / e.std_error;
      o.require(std::abs(z) <= 3.0, fmt::format("{}: |z| = {:.2f} <= 3", r.name, std::abs(z)));
      o.require(secs < 30.0, fmt::format("{}: {:.2f} s < 30 s", r.name, secs));
      o.note(fmt::format("{}: {:.6g} vs {:.6g} (se {:.3g}, z {:+.2f})", r.name, e.estimate, r.target, e.std_error, z));
    }
    return o;
  });
}

CheckResult criterion_chebyshev(unsigned workers) {
  return timed("AC9", "Chebyshev sandwich", [=] {
    Outcome o;
    constexpr std::size_t kN = 20;
    constexpr std::size_t kReps = 10000;
    const ProcessModel fixtures[] = {ProcessModel::running_mean(0.0, 1.0), ProcessModel::telegraph(1.0)};
    std::size_t checked = 0;
    double tightest = std::numeric_limits<double>::infinity();
    for (const auto& p : fixtures) {
      const VarianceProfile profile = process_profile(p, kN);
      for (int k = 1; k <= 20; ++k) {
        const double delta = k / 10.0;
        const double bound = tail_bound_mean(profile, delta, Dependence::Correlated);
        const McEstimate e = empirical_tail(p, kN, delta, kReps, 900 + static_cast<std::uint64_t>(k), workers);
        o.require(e.estimate <= bound + 3.0 * e.std_error,
                  fmt::format("{} delta={}: frequency {} <= {} + 3 se", p.name(), delta, e.estimate, bound));
        tightest = std::min(tightest, bound + 3.0 * e.std_error - e.estimate);
        ++checked;
      }
    }
    for (std::size_t n : {1, 2, 5, 20, 50, 97}) {
      const VarianceProfile profile = process_profile(ProcessModel::running_mean(0.0, 1.3), n);
      for (int k = 1; k <= 20; ++k) {
        const double delta = k / 10.0;
        const double corr = tail_bound_mean(profile, delta, Dependence::Correlated);
        const double uncorr = tail_bound_mean(profile, delta, Dependence::Uncorrelated);
        o.require(uncorr == corr / static_cast<double>(n), fmt::format("uncorrelated == correlated / n at n={}", n));
      }
    }
    o.require(tail_bound_standardized(7, 2.0, StandardizedForm::Mean) == 0.25, "mean form at delta=2 is 1/4");
    o.require(tail_bound_standardized(3, 3.0, StandardizedForm::Sum) == 1.0, "sum form n=3 delta=3 is 1");
    o.require(tail_bound_standardized(4, 2.0, StandardizedForm::Sum) == 4.0, "sum form n=4 delta=2 is 4");
    o.require(tail_bound_standardized(4, 8.0, StandardizedForm::Sum) == tail_bound_standardized(4, 2.0, StandardizedForm::Mean),
              "sum form at n*delta equals mean form at delta");
    o.note(fmt::format("{} empirical tails under bound, smallest margin {:.3g}", checked, tightest));
    return o;
  });
}

CheckResult criterion_lln() {
  return timed("AC10", "LLN verdicts and power-mean monotonicity", [] {
    Outcome o;
    const auto grid = full_grid(200);
    const auto rm = ProcessModel::running_mean(0.0, 1.0);
    const LlnDiagnostic d28 = diagnose(rm, LlnCondition::Markov28, grid);
    o.require(d28.verdict == Verdict::Converging, "running-mean condition 28 Converging");
    const double h200 = static_cast<double>(oracle_harmonic(200) / 200.0L);
    const double v200 = d28.samples.back().value;
    o.require(close_rel(v200, h200, 1e-12), fmt::format("H_200/200 {:.15g} == {:.15g}", v200, h200));
    o.note(fmt::format("running-mean condition 28 at n=200: {:.6f}, {}", v200, to_string(d28.verdict)));

    const auto tg = ProcessModel::telegraph(1.0);
    const LlnDiagnostic t28 = diagnose(tg, LlnCondition::Markov28, grid);
    const bool quarter = std::all_of(t28.samples.begin(), t28.samples.end(),
                                     [](const LlnSample& s) { return std::abs(s.value - 0.25) <= 1e-15; });
    o.require(quarter, "telegraph condition 28 is 1/4 for every n");
    o.require(t28.verdict == Verdict::NotConverging, "telegraph condition 28 NotConverging");
    const Theorem12Report t36 = theorem12_check(tg, grid, 1.0, 0.5);
    o.require(t36.diagnostic.verdict == Verdict::Converging, "telegraph condition 36 Converging");
    const double vm = t36.rows.back().var_of_mean;
    o.require(vm < 0.02, fmt::format("telegraph Var(mean_200) {:.6g} < 0.02", vm));
    o.require(telegraph_var_of_mean(1.0, 200) < 0.02, "closed-form Var(mean_200) < 0.02");
    o.note(fmt::format("telegraph condition 28 {}, condition 36 {} [variance {}, covariance {}], Var(mean_200) {:.6g}",
                       to_string(t28.verdict), to_string(t36.diagnostic.verdict), to_string(t36.variance_branch),
                       to_string(t36.covariance_branch), vm));

    std::size_t failures = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
      Engine rng = make_engine(derive_seed(1010, k));
      const std::size_t n = gen::uniform_size(1, 20, rng);
      const auto v = gen::uniform_vector(n, 0.0, 10.0, rng);
      std::uniform_real_distribution<double> u(1e-3, 4.0);
      double r = u(rng);
      double s = u(rng);
      if (r > s) std::swap(r, s);
      const double scale = *std::max_element(v.begin(), v.end());
      if (power_mean(v, r) > power_mean(v, s) + 1e-10 * std::max(scale, 1.0)) ++failures;
    }
    o.require(failures == 0, fmt::format("power-mean monotonicity: {} failures", failures));
    o.note("power mean monotone in r on 1000 profiles");
    return o;
  });
}

// ---------------------------------------------------------------------------
// Module property suites.

CheckResult property_classification() {
  return timed("model.classes", "weight classes partition finite inputs", [] {
    Outcome o;
    std::size_t mismatches = 0;
    std::size_t counts[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < 20000; ++k) {
      Engine rng = make_engine(derive_seed(11, k));
      const std::size_t n = gen::uniform_size(1, 8, rng);
      std::vector<double> w;
      switch (k % 4) {
        case 0: w = gen::simplex_weights(n, rng); break;
        case 1: w = gen::sub_simplex_weights(n, rng); break;
        case 2: w = gen::uniform_vector(n, 0.0, 2.0, rng); break;
        default: w = gen::uniform_vector(n, -1.0, 1.0, rng); break;
      }
      const WeightClass c = classify_weights(w).weight_class();
      bool unit = true;
      bool nonneg = true;
      long double sum = 0.0L;
      for (double x : w) {
        unit = unit && x >= 0.0 && x <= 1.0;
        nonneg = nonneg && x >= 0.0;
        sum += x;
      }
      const bool simplex = unit && std::fabs(sum - 1.0L) <= 1e-12L;
      const bool sub = unit && !simplex && sum > 0.0L && sum < 1.0L;
      const int memberships = int(c == WeightClass::Simplex) + int(c == WeightClass::SubSimplex) +
                              int(c == WeightClass::NonNegative) + int(c == WeightClass::General);
      const WeightClass expected = simplex ? WeightClass::Simplex
                                   : sub   ? WeightClass::SubSimplex
                                   : nonneg ? WeightClass::NonNegative
                                            : WeightClass::General;
      if (memberships != 1 || c != expected) ++mismatches;
      ++counts[static_cast<int>(c)];
    }
    o.require(mismatches == 0, fmt::format("{} misclassified", mismatches));
    o.note(fmt::format("simplex {}, sub-simplex {}, non-negative {}, general {}", counts[0], counts[1], counts[2],
                       counts[3]));
    return o;
  });
}

CheckResult property_random_correlation() {
  return timed("model.random_correlation", "random_correlation valid for n <= 32 over 1000 seeds", [] {
    Outcome o;
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= 32; ++n) {
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const CorrelationMatrix c = random_correlation(n, seed);
        if (!check_correlation(n, c.entries()).ok()) ++bad;
      }
    }
    o.require(bad == 0, fmt::format("{} invalid matrices", bad));
    const CorrelationMatrix a = random_correlation(5, 7);
    const CorrelationMatrix b = random_correlation(5, 7);
    o.require(std::equal(a.entries().begin(), a.entries().end(), b.entries().begin()), "deterministic in seed");
    o.note("32000 matrices");
    return o;
  });
}

CheckResult property_cauchy_schwarz() {
  return timed("model.cauchy_schwarz", "|Cov(X_i,X_j)| <= sigma_i sigma_j", [] {
    Outcome o;
    std::size_t bad = 0;
    for (std::size_t k = 0; k < 500; ++k) {
      Engine rng = make_engine(derive_seed(12, k));
      const std::size_t n = gen::uniform_size(1, 10, rng);
      const CovarianceModel m = random_model(n, rng, derive_seed(13, k));
      for (std::size_t i = 0; i < n; ++i) {
        if (m.cov(i, i) != m.profile()[i]) ++bad;
        for (std::size_t j = 0; j < n; ++j) {
          if (std::abs(m.cov(i, j)) > m.sigma(i) * m.sigma(j) * (1.0 + 1e-15)) ++bad;
        }
      }
    }
    o.require(bad == 0, fmt::format("{} entries out of bound", bad));
    o.note("500 random models");
    return o;
  });
}

CheckResult property_bounds_misc() {
  return timed("bounds.properties", "uniform-weight bound, scale covariance, covariance-sum sandwich", [] {
    Outcome o;
    std::size_t c1 = 0;
    std::size_t scale = 0;
    std::size_t sandwich = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
      Engine rng = make_engine(derive_seed(21, k));
      const std::size_t n = gen::uniform_size(2, 8, rng);
      const CovarianceModel m = random_model(n, rng, derive_seed(22, k));
      const WeightVector uniform(std::vector<double>(n, 1.0 / static_cast<double>(n)));
      const double mean_var = m.profile().total() / static_cast<double>(n);
      if (exact_variance(uniform, m) > mean_var + 1e-9 * std::max(1.0, mean_var)) ++c1;

      const auto w = gen::uniform_vector(n, -3.0, 3.0, rng);
      std::uniform_real_distribution<double> cd(-5.0, 5.0);
      const double c = cd(rng);
      auto cw = w;
      for (auto& x : cw) x *= c;
      const double base = exact_variance(WeightVector(w), m);
      const double scaled = exact_variance(WeightVector(cw), m);
      const double tol = 1e-12 * std::max(std::abs(scaled), c * c * base) + 1e-12 * c * c * m.profile().total();
      if (std::abs(scaled - c * c * base) > tol) ++scale;

      if (!covariance_sum_bounds(m).holds) ++sandwich;
    }
    o.require(c1 == 0, fmt::format("uniform-weight bound: {} failures", c1));
    o.require(scale == 0, fmt::format("scale covariance: {} failures", scale));
    o.require(sandwich == 0, fmt::format("covariance-sum sandwich: {} failures", sandwich));
    o.note("1000 random PSD instances");
    return o;
  });
}

CheckResult property_tail_scaling() {
  return timed("tails.scaling", "bounds decrease in delta and scale as 1/delta^2", [] {
    Outcome o;
    std::size_t bad = 0;
    for (std::size_t k = 0; k < 500; ++k) {
      Engine rng = make_engine(derive_seed(31, k));
      const std::size_t n = gen::uniform_size(1, 10, rng);
      const WeightVector w(gen::uniform_vector(n, -2.0, 2.0, rng));
      const VarianceProfile p(gen::uniform_vector(n, 0.01, 5.0, rng));
      const double delta = gen::uniform_vector(1, 0.05, 5.0, rng)[0];
      const double values[][2] = {
          {tail_bound_weighted(w, p, delta), tail_bound_weighted(w, p, 2.0 * delta)},
          {tail_bound_mean(p, delta, Dependence::Correlated), tail_bound_mean(p, 2.0 * delta, Dependence::Correlated)},
          {tail_bound_mean(p, delta, Dependence::Uncorrelated),
           tail_bound_mean(p, 2.0 * delta, Dependence::Uncorrelated)},
          {tail_bound_standardized(n, delta, StandardizedForm::Mean),
           tail_bound_standardized(n, 2.0 * delta, StandardizedForm::Mean)},
          {tail_bound_standardized(n, delta, StandardizedForm::Sum),
           tail_bound_standardized(n, 2.0 * delta, StandardizedForm::Sum)},
      };
      for (const auto& v : values) {
        if (!close_rel(v[1], v[0] / 4.0, 1e-12)) ++bad;
        if (v[0] > 0.0 && !(v[1] < v[0])) ++bad;
      }
    }
    o.require(bad == 0, fmt::format("{} failures", bad));
    o.note("500 instances, 5 bound forms");
    return o;
  });
}

CheckResult property_lln_identities() {
  return timed("lln.identities", "markov25 equals Var(mean_n); power mean dominates mean variance", [] {
    Outcome o;
    const ProcessModel ps[] = {ProcessModel::running_mean(1.0, 0.7), ProcessModel::running_mean(0.0, 2.0),
                               ProcessModel::telegraph(0.1), ProcessModel::telegraph(1.0), ProcessModel::telegraph(5.0)};
    double worst = 0.0;
    std::size_t order_bad = 0;
    for (const auto& p : ps) {
      const auto var = variance_sequence(p);
      for (std::size_t n = 1; n <= 100; ++n) {
        const double a = markov25_value(p, n);
        const double b = var_of_mean(p, n);
        worst = std::max(worst, std::abs(a - b) / b);
        const double m28 = markov28_value(var, n);
        for (double s : {1.0, 1.5, 2.0, 3.0}) {
          if (m28 > theorem8_condition(var, n, s) * (1.0 + 1e-12)) ++order_bad;
        }
      }
    }
    o.require(worst <= 1e-12, fmt::format("markov25 vs closed form max rel {:.3g}", worst));
    o.require(order_bad == 0, fmt::format("power-mean ordering: {} failures", order_bad));
    o.note(fmt::format("max relative difference {:.3g}", worst));
    return o;
  });
}

CheckResult property_processes(unsigned workers) {
  return timed("processes.properties", "flip probability, stationarity, MC scaling, worker independence", [=] {
    Outcome o;
    for (double lambda : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      long double series = 0.0L;
      long double term = std::exp(-static_cast<long double>(lambda));  // k = 0
      for (int k = 1; k < 200; ++k) {
        term *= static_cast<long double>(lambda) / k;
        if (k % 2 == 1) series += term;
      }
      const double closed = telegraph_flip_probability(lambda);
      o.require(close_rel(closed, static_cast<double>(series), 1e-12),
                fmt::format("flip probability lambda={}: {:.17g} vs {:.17g}", lambda, closed, static_cast<double>(series)));
    }
    const auto tg = ProcessModel::telegraph(0.7);
    bool stationary = true;
    for (std::size_t i = 1; i <= 30; ++i) {
      for (std::size_t j = 1; j <= 30; ++j) {
        const std::size_t lag = i > j ? i - j : j - i;
        stationary = stationary && kernel_cov(tg, i, j) == kernel_cov(tg, 1, 1 + lag);
      }
    }
    o.require(stationary, "telegraph kernel depends on |i-j| only");

    const McEstimate small = mc_estimate(tg, Statistic::var_of_mean_n(), 10, 20000, 77, workers);
    const McEstimate large = mc_estimate(tg, Statistic::var_of_mean_n(), 10, 40000, 78, workers);
    const double shrink = small.std_error / large.std_error;
    o.require(std::abs(shrink / std::sqrt(2.0) - 1.0) <= 0.10,
              fmt::format("doubling reps shrinks se by {:.4f} (sqrt 2 +- 10%)", shrink));

    const McEstimate one = mc_estimate(tg, Statistic::mean_n(), 12, 3000, 5, 1);
    const McEstimate many = mc_estimate(tg, Statistic::mean_n(), 12, 3000, 5, 4);
    o.require(one.estimate == many.estimate && one.std_error == many.std_error, "result independent of workers");
    o.note(fmt::format("se ratio {:.4f}", shrink));
    return o;
  });
}

CheckResult property_table1(unsigned workers) {
  return timed("table1.properties", "order independence, equality case, permutation symmetry", [=] {
    Outcome o;
    for (std::size_t n : {2, 3}) {
      for (Table1Method m : {Table1Method::Exact, Table1Method::FloatResidual}) {
        const Table1Row fwd = run_table1(GridSpec{n}, m, workers, IterationOrder::Forward);
        const Table1Row rev = run_table1(GridSpec{n}, m, workers, IterationOrder::Reverse);
        o.require(fwd.violations == rev.violations && fwd.total == rev.total,
                  fmt::format("n={} {} reversed order", n, to_string(m)));
      }
    }
    // Uniform compositions: both sides equal, never a violation.
    for (const std::vector<int>& a : {std::vector<int>{5, 5}, std::vector<int>{2, 2, 2, 2, 2}}) {
      std::vector<int> b(a.size(), 1);
      bool any = false;
      for (std::size_t k = 0; k < 20000; ++k) {
        Engine rng = make_engine(derive_seed(41, k));
        for (auto& x : b) x = static_cast<int>(gen::uniform_size(1, 20, rng));
        any = any || table1_violation(a, b, 10);
      }
      o.require(!any, fmt::format("uniform composition of size {} never violates", a.size()));
    }
    std::size_t asym = 0;
    for (std::size_t k = 0; k < 5000; ++k) {
      Engine rng = make_engine(derive_seed(42, k));
      const std::size_t n = gen::uniform_size(2, 5, rng);
      const auto comps = enumerate_weight_compositions(n);
      auto a = comps[gen::uniform_size(0, comps.size() - 1, rng)];
      std::vector<int> b(n);
      for (auto& x : b) x = static_cast<int>(gen::uniform_size(1, 20, rng));
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> pa(n);
      std::vector<int> pb(n);
      for (std::size_t i = 0; i < n; ++i) {
        pa[i] = a[perm[i]];
        pb[i] = b[perm[i]];
      }
      if (table1_violation(a, b, 10) != table1_violation(pa, pb, 10)) ++asym;
    }
    o.require(asym == 0, fmt::format("{} permutation mismatches", asym));
    o.note("n=2,3 both methods reversed; 5000 permuted grid points");
    return o;
  });
}

}  // namespace

std::vector<CheckResult> run_acceptance(unsigned workers) {
  std::vector<CheckResult> out;
  out.push_back(criterion_table1(1, 2, 3600, 520, 1.0, workers));
  out.push_back(criterion_table1(2, 3, 288000, 29137, 5.0, workers));
  out.push_back(criterion_table1_n4(workers));
  out.push_back(criterion_golden());
  out.push_back(criterion_dominance(workers));
  out.push_back(criterion_minors());
  out.push_back(criterion_triangle());
  out.push_back(criterion_monte_carlo(workers));
  out.push_back(criterion_chebyshev(workers));
  out.push_back(criterion_lln());
  return out;
}

std::vector<CheckResult> run_properties(unsigned workers) {
  std::vector<CheckResult> out;
  out.push_back(property_classification());
  out.push_back(property_random_correlation());
  out.push_back(property_cauchy_schwarz());
  out.push_back(property_bounds_misc());
  out.push_back(property_tail_scaling());
  out.push_back(property_lln_identities());
  out.push_back(property_processes(workers));
  out.push_back(property_table1(workers));
  return out;
}

}  // namespace varbound
