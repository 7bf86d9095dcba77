#include "varbound/processes.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <thread>

#include <fmt/format.h>

#include "varbound/errors.hpp"
#include "varbound/numeric.hpp"

namespace varbound {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ProcessModel ProcessModel::running_mean(double mu, double sigma) {
  if (!std::isfinite(mu)) throw InvalidInput("running-mean mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("running-mean sigma must be > 0");
  return ProcessModel(RunningMeanNormal{mu, sigma});
}

ProcessModel ProcessModel::telegraph(double lambda, double p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("telegraph lambda must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("telegraph p must lie in (0, 1)");
  return ProcessModel(Telegraph{lambda, p});
}

ProcessModel ProcessModel::user_kernel(UserKernel kernel) {
  if (!kernel.variance || !kernel.covariance) throw InvalidInput("user kernel needs variance and covariance");
  return ProcessModel(std::move(kernel));
}

std::string ProcessModel::name() const {
  return std::visit(Overloaded{[](const RunningMeanNormal&) { return std::string("running-mean"); },
                               [](const Telegraph&) { return std::string("telegraph"); },
                               [](const UserKernel&) { return std::string("user-kernel"); }},
                    variant_);
}

bool ProcessModel::sampleable() const { return !std::holds_alternative<UserKernel>(variant_); }

namespace {

void require_time_index(std::size_t i) {
  if (i < 1) throw InvalidInput("time indices start at 1");
}

}  // namespace

double ProcessModel::variance(std::size_t i) const {
  require_time_index(i);
  return std::visit(
      Overloaded{[i](const RunningMeanNormal& m) { return m.sigma * m.sigma / static_cast<double>(i); },
                 [](const Telegraph& t) { return t.p * (1.0 - t.p); },
                 [i](const UserKernel& k) { return k.variance(i); }},
      variant_);
}

double ProcessModel::mean(std::size_t i) const {
  require_time_index(i);
  return std::visit(Overloaded{[](const RunningMeanNormal& m) { return m.mu; },
                               [](const Telegraph& t) { return t.p; },
                               [i](const UserKernel& k) {
                                 if (!k.mean) throw InvalidInput("user kernel has no mean function");
                                 return k.mean(i);
                               }},
                    variant_);
}

double kernel_cov(const ProcessModel& process, std::size_t i, std::size_t j) {
  require_time_index(i);
  require_time_index(j);
  return std::visit(
      Overloaded{[&](const RunningMeanNormal& m) {
                   return m.sigma * m.sigma / static_cast<double>(std::max(i, j));
                 },
                 [&](const Telegraph& t) {
                   const double lag = static_cast<double>(i > j ? i - j : j - i);
                   return t.p * (1.0 - t.p) * std::exp(-2.0 * t.lambda * lag);
                 },
                 [&](const UserKernel& k) {
                   const double c = k.covariance(i, j);
                   const double c_t = k.covariance(j, i);
                   const double tol = 1e-12 * std::max({1.0, std::abs(c), std::abs(c_t)});
                   if (std::abs(c - c_t) > tol) {
                     throw InvalidModel(fmt::format("user kernel is not symmetric at ({}, {})", i, j));
                   }
                   if (i == j && std::abs(c - k.variance(i)) > tol) {
                     throw InvalidModel(fmt::format("user kernel covariance({0},{0}) != variance({0})", i));
                   }
                   return c;
                 }},
      process.variant());
}

double running_mean_var_of_mean(double sigma, std::size_t n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  const double s2 = sigma * sigma;
  const double nd = static_cast<double>(n);
  return (2.0 * nd * s2 - s2 * harmonic_number(n)) / (nd * nd);
}

double telegraph_var_of_mean(double lambda, std::size_t n, double p) {
  if (!(lambda > 0.0)) throw InvalidInput("telegraph lambda must be > 0");
  if (n < 1) throw InvalidInput("n must be >= 1");
  const double nd = static_cast<double>(n);
  const double q = std::exp(-2.0 * lambda);
  const double one_minus_q = -std::expm1(-2.0 * lambda);
  const double qn = std::exp(-2.0 * lambda * nd);
  double weighted = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    weighted += static_cast<double>(k) * std::exp(-2.0 * lambda * static_cast<double>(k));
  }
  const double bracket = 1.0 + 2.0 * (q - qn) / one_minus_q - 2.0 / nd * weighted;
  return p * (1.0 - p) * bracket / nd;
}

double telegraph_flip_probability(double lambda) { return -0.5 * std::expm1(-2.0 * lambda); }

double var_of_mean(const ProcessModel& process, std::size_t n) {
  if (n < 1) throw InvalidInput("n must be >= 1");
  if (const auto* m = std::get_if<RunningMeanNormal>(&process.variant())) {
    return running_mean_var_of_mean(m->sigma, n);
  }
  if (const auto* t = std::get_if<Telegraph>(&process.variant())) {
    return telegraph_var_of_mean(t->lambda, n, t->p);
  }
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) s += kernel_cov(process, i, j);
  }
  const double nd = static_cast<double>(n);
  return s / (nd * nd);
}

SamplePath sample_running_mean(double mu, double sigma, std::size_t n, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidInput("running-mean sigma must be > 0");
  if (n < 1) throw InvalidInput("n must be >= 1");
  Engine rng = make_engine(seed);
  std::normal_distribution<double> normal(mu, sigma);
  SamplePath path{{}, seed, "running-mean"};
  path.values.reserve(n);
  double running = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    running += normal(rng);
    path.values.push_back(running / static_cast<double>(k));
  }
  return path;
}

SamplePath sample_telegraph(double lambda, double p, std::size_t n, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidInput("telegraph lambda must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("telegraph p must lie in (0, 1)");
  if (n < 1) throw InvalidInput("n must be >= 1");
  Engine rng = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Unit-time transition probabilities of the two-state chain with rates
  // 2 lambda p (0 -> 1) and 2 lambda (1 - p) (1 -> 0).
  const double mix = -std::expm1(-2.0 * lambda);
  const double up = p * mix;
  const double down = (1.0 - p) * mix;
  SamplePath path{{}, seed, "telegraph"};
  path.values.reserve(n);
  bool state = unit(rng) < p;
  path.values.push_back(state ? 1.0 : 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double u = unit(rng);
    state = state ? !(u < down) : (u < up);
    path.values.push_back(state ? 1.0 : 0.0);
  }
  return path;
}

SamplePath sample_path(const ProcessModel& process, std::size_t n, std::uint64_t seed) {
  if (const auto* m = std::get_if<RunningMeanNormal>(&process.variant())) {
    return sample_running_mean(m->mu, m->sigma, n, seed);
  }
  if (const auto* t = std::get_if<Telegraph>(&process.variant())) {
    return sample_telegraph(t->lambda, t->p, n, seed);
  }
  throw InvalidInput("process '" + process.name() + "' cannot be sampled");
}

Statistic Statistic::parse(const std::string& text) {
  static const std::regex cov_re(R"(\s*cov\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  static const std::regex tail_re(R"(\s*tail\(\s*([-+0-9.eE]+)\s*\)\s*)");
  if (text == "mean_n") return mean_n();
  if (text == "var_of_mean_n") return var_of_mean_n();
  std::smatch m;
  if (std::regex_match(text, m, cov_re)) {
    return cov(std::stoul(m[1].str()), std::stoul(m[2].str()));
  }
  if (std::regex_match(text, m, tail_re)) return tail(std::stod(m[1].str()));
  throw InvalidInput("unknown statistic '" + text + "'");
}

std::string Statistic::label() const {
  switch (kind) {
    case Kind::MeanN: return "mean_n";
    case Kind::VarOfMeanN: return "var_of_mean_n";
    case Kind::Cov: return fmt::format("cov({},{})", i, j);
    case Kind::Tail: return fmt::format("tail({:.12g})", delta);
  }
  return "unknown";
}

namespace {

double mean_of(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

/// Unbiased sample variance around a known centre.
double sample_variance(std::span<const double> v, double centre) {
  std::vector<double> d(v.size());
  std::transform(v.begin(), v.end(), d.begin(), [centre](double x) { return (x - centre) * (x - centre); });
  return pairwise_sum(d) / static_cast<double>(v.size() - 1);
}

double expected_mean(const ProcessModel& process, std::size_t n) {
  std::vector<double> means(n);
  for (std::size_t i = 1; i <= n; ++i) means[i - 1] = process.mean(i);
  return pairwise_sum(means) / static_cast<double>(n);
}

template <class Fn>
void for_each_replicate(std::size_t reps, unsigned workers, Fn&& fn) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(reps, 256))));
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t block = (reps + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(reps, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t r = lo; r < hi; ++r) fn(r);
    });
  }
}

}  // namespace

McEstimate mc_estimate(const ProcessModel& process, const Statistic& stat, std::size_t n, std::size_t reps,
                       std::uint64_t seed, unsigned workers) {
  if (reps < kMinReplicates) throw InvalidInput(fmt::format("reps must be >= {}", kMinReplicates));
  if (n < 1) throw InvalidInput("n must be >= 1");
  if (!process.sampleable()) throw InvalidInput("process '" + process.name() + "' cannot be sampled");
  if (stat.kind == Statistic::Kind::Cov && (stat.i < 1 || stat.j < 1 || stat.i > n || stat.j > n)) {
    throw InvalidInput(fmt::format("cov indices must lie in 1..{}", n));
  }
  if (stat.kind == Statistic::Kind::Tail && !(stat.delta > 0.0)) throw InvalidInput("delta must be > 0");

  // Per-replicate values; cov keeps both coordinates.
  const bool pairs = stat.kind == Statistic::Kind::Cov;
  std::vector<double> first(reps);
  std::vector<double> second(pairs ? reps : 0);
  for_each_replicate(reps, workers, [&](std::size_t r) {
    const SamplePath path = sample_path(process, n, derive_seed(seed, r));
    if (pairs) {
      first[r] = path.values[stat.i - 1];
      second[r] = path.values[stat.j - 1];
    } else {
      first[r] = pairwise_sum(path.values) / static_cast<double>(n);
    }
  });

  const double rd = static_cast<double>(reps);
  McEstimate est;
  est.reps = reps;
  switch (stat.kind) {
    case Statistic::Kind::MeanN: {
      est.estimate = mean_of(first);
      est.std_error = std::sqrt(sample_variance(first, est.estimate) / rd);
      break;
    }
    case Statistic::Kind::VarOfMeanN: {
      const double m = mean_of(first);
      std::vector<double> sq(reps);
      std::transform(first.begin(), first.end(), sq.begin(), [m](double y) { return (y - m) * (y - m); });
      est.estimate = pairwise_sum(sq) / (rd - 1.0);
      est.std_error = std::sqrt(sample_variance(sq, mean_of(sq)) / rd);
      break;
    }
    case Statistic::Kind::Cov: {
      const double mi = mean_of(first);
      const double mj = mean_of(second);
      std::vector<double> prod(reps);
      for (std::size_t r = 0; r < reps; ++r) prod[r] = (first[r] - mi) * (second[r] - mj);
      est.estimate = pairwise_sum(prod) / (rd - 1.0);
      est.std_error = std::sqrt(sample_variance(prod, mean_of(prod)) / rd);
      break;
    }
    case Statistic::Kind::Tail: {
      const double centre = expected_mean(process, n);
      std::size_t count = 0;
      for (double y : first) count += std::abs(y - centre) > stat.delta ? 1 : 0;
      const double f = static_cast<double>(count) / rd;
      est.count = count;
      est.estimate = f;
      est.std_error = std::sqrt(f * (1.0 - f) / rd);
      break;
    }
  }
  return est;
}

std::optional<double> closed_form(const ProcessModel& process, const Statistic& stat, std::size_t n) {
  switch (stat.kind) {
    case Statistic::Kind::MeanN: return expected_mean(process, n);
    case Statistic::Kind::VarOfMeanN: return var_of_mean(process, n);
    case Statistic::Kind::Cov: return kernel_cov(process, stat.i, stat.j);
    case Statistic::Kind::Tail: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace varbound
