#include "varbound/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "varbound/errors.hpp"

namespace varbound {

std::string_view to_string(BoundTag tag) {
  switch (tag) {
    case BoundTag::T1: return "T1";
    case BoundTag::T1prime: return "T1prime";
    case BoundTag::T3: return "T3";
    case BoundTag::T4: return "T4";
    case BoundTag::T5: return "T5";
    case BoundTag::C2chain: return "C2chain";
    case BoundTag::C3chain: return "C3chain";
  }
  return "unknown";
}

const BoundEntry& BoundReport::at(BoundTag tag) const {
  for (const auto& e : entries) {
    if (e.tag == tag) return e;
  }
  throw InvalidInput(fmt::format("bound {} missing from report", to_string(tag)));
}

double slack_tolerance(double exact) { return 1e-9 * std::max(1.0, exact); }

namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput(fmt::format("dimension mismatch: {} weights vs {} variables", a, b));
}

double weighted_variance_sum(const WeightVector& w, const VarianceProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * p[i];
  return s;
}

double abs_weighted_variance_sum(const WeightVector& w, const VarianceProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(w[i]) * p[i];
  return s;
}

double square_weight_sum(const WeightVector& w) {
  double s = 0.0;
  for (double a : w.values()) s += a * a;
  return s;
}

}  // namespace

double exact_variance(const WeightVector& w, const CovarianceModel& model) {
  require_same_size(w.size(), model.size());
  const std::size_t n = w.size();
  double diag = 0.0;
  double cross = 0.0;
  double scale = 0.0;  // (sum |a_i| s_i)^2 bounds |Var| whenever |rho| <= 1
  for (std::size_t i = 0; i < n; ++i) {
    diag += w[i] * w[i] * model.profile()[i];
    scale += std::abs(w[i]) * model.sigma(i);
    for (std::size_t j = i + 1; j < n; ++j) cross += w[i] * w[j] * model.cov(i, j);
  }
  scale *= scale;
  const double v = diag + 2.0 * cross;
  if (v < 0.0 && v >= -1e-9 * std::max(scale, std::numeric_limits<double>::min())) return 0.0;
  return v;
}

double bound_theorem1(const WeightVector& w, const VarianceProfile& p) {
  require_same_size(w.size(), p.size());
  if (w.weight_class() != WeightClass::Simplex && w.weight_class() != WeightClass::SubSimplex) {
    throw NotApplicable(fmt::format("sum a_i Var(X_i) bound needs simplex or sub-simplex weights, got {}",
                                    to_string(w.weight_class())));
  }
  return weighted_variance_sum(w, p);
}

double bound_theorem1prime(const WeightVector& w, const VarianceProfile& p) {
  require_same_size(w.size(), p.size());
  if (w.weight_class() != WeightClass::Simplex) {
    throw NotApplicable(fmt::format("(sum a_i^2)(sum Var) bound needs simplex weights, got {}",
                                    to_string(w.weight_class())));
  }
  return square_weight_sum(w) * p.total();
}

double bound_theorem4(const WeightVector& w, const VarianceProfile& p) {
  require_same_size(w.size(), p.size());
  if (!w.all_nonnegative()) throw NotApplicable("(sum a_i)(sum a_i Var) bound needs non-negative weights");
  return w.sum() * weighted_variance_sum(w, p);
}

double bound_theorem5(const WeightVector& w, const VarianceProfile& p) {
  require_same_size(w.size(), p.size());
  return w.abs_sum() * abs_weighted_variance_sum(w, p);
}

BoundReport bound_report(const WeightVector& w, const CovarianceModel& model) {
  require_same_size(w.size(), model.size());
  const VarianceProfile& p = model.profile();
  const WeightClass cls = w.weight_class();

  BoundReport r;
  r.exact = exact_variance(w, model);
  r.weight_class = cls;
  r.hypothetical = model.hypothetical();

  const double tol = slack_tolerance(r.exact);
  auto add = [&](BoundTag tag, bool applicable, double value) -> BoundEntry& {
    BoundEntry e{tag, applicable, value, applicable ? value - r.exact : 0.0, {}};
    r.entries.push_back(std::move(e));
    return r.entries.back();
  };

  const double weighted = weighted_variance_sum(w, p);
  const double abs_weighted = abs_weighted_variance_sum(w, p);
  const double total = p.total();

  add(BoundTag::T1, cls == WeightClass::Simplex, weighted);
  add(BoundTag::T1prime, cls == WeightClass::Simplex, square_weight_sum(w) * total);
  add(BoundTag::T3, cls == WeightClass::SubSimplex, weighted);
  add(BoundTag::T4, w.all_nonnegative(), w.sum() * weighted);
  add(BoundTag::T5, true, w.abs_sum() * abs_weighted);

  const bool unit_abs = std::all_of(w.values().begin(), w.values().end(),
                                    [](double a) { return std::abs(a) <= 1.0; });
  {
    const bool applicable = w.abs_sum() <= 1.0 + kSimplexTolerance;
    BoundEntry& e = add(BoundTag::C2chain, applicable, abs_weighted);
    if (applicable) e.chain = {w.abs_sum() * abs_weighted, abs_weighted, total};
  }
  {
    const bool applicable = unit_abs && model.correlation().off_diagonal_zero();
    double squares = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) squares += w[i] * w[i] * p[i];
    BoundEntry& e = add(BoundTag::C3chain, applicable, abs_weighted);
    if (applicable) {
      e.chain = {squares, abs_weighted, total};
      if (std::abs(squares - r.exact) > tol) {
        r.violations.push_back(fmt::format("C3chain: exact {:.12g} differs from sum a_i^2 Var {:.12g}",
                                           r.exact, squares));
      }
    }
  }

  if (r.hypothetical) return r;

  for (const auto& e : r.entries) {
    if (!e.applicable) continue;
    if (e.slack < -tol) {
      r.violations.push_back(fmt::format("{}: bound {:.12g} below exact variance {:.12g}",
                                         to_string(e.tag), e.value, r.exact));
    }
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      if (e.chain[k - 1] > e.chain[k] + slack_tolerance(e.chain[k])) {
        r.violations.push_back(fmt::format("{}: chain out of order at position {}", to_string(e.tag), k));
      }
    }
  }
  return r;
}

Eigen::MatrixXd weight_gram_complement(const WeightVector& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ai = w[static_cast<std::size_t>(i)];
      const double aj = w[static_cast<std::size_t>(j)];
      a(i, j) = i == j ? ai - ai * ai : -ai * aj;
    }
  }
  return a;
}

namespace {

void check_subset(std::size_t n, std::span<const std::size_t> subset) {
  if (subset.empty()) throw InvalidInput("principal minor subset is empty");
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] >= n) throw InvalidInput(fmt::format("subset index {} out of range", subset[k]));
    if (k > 0 && subset[k] <= subset[k - 1]) {
      throw InvalidInput("principal minor subset must be strictly increasing");
    }
  }
}

std::vector<std::size_t> subset_from_mask(std::uint32_t mask) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) s.push_back(i);
  }
  return s;
}

}  // namespace

double principal_minor(const WeightVector& w, std::span<const std::size_t> subset) {
  check_subset(w.size(), subset);
  double product = 1.0;
  double sum = 0.0;
  for (std::size_t i : subset) {
    product *= w[i];
    sum += w[i];
  }
  return product * (1.0 - sum);
}

double principal_minor_direct(const Eigen::MatrixXd& a, std::span<const std::size_t> subset) {
  check_subset(static_cast<std::size_t>(a.rows()), subset);
  const auto k = static_cast<Eigen::Index>(subset.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      sub(r, c) = a(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(r)]),
                    static_cast<Eigen::Index>(subset[static_cast<std::size_t>(c)]));
    }
  }
  return sub.partialPivLu().determinant();
}

PsdVerdict check_A_psd(const WeightVector& w) {
  const std::size_t n = w.size();
  const Eigen::MatrixXd a = weight_gram_complement(w);
  PsdVerdict v;

  // Closed form vs determinant on small subsets. Discrepancy is measured on
  // the minor's natural scale prod |a_i|.
  const std::size_t cross_n = std::min(n, kExhaustiveMinorLimit);
  for (std::uint32_t mask = 1; mask < (1U << cross_n); ++mask) {
    if (std::popcount(mask) > 5) continue;
    const auto subset = subset_from_mask(mask);
    const double closed = principal_minor(w, subset);
    const double direct = principal_minor_direct(a, subset);
    double scale = std::abs(direct);
    double product = 1.0;
    for (std::size_t i : subset) product *= std::abs(w[i]);
    scale = std::max(scale, product);
    const double diff = std::abs(closed - direct);
    const double rel = scale > 0.0 ? diff / scale : diff;
    v.max_minor_discrepancy = std::max(v.max_minor_discrepancy, rel);
    ++v.minors_cross_checked;
  }
  v.minor_formula_consistent = v.max_minor_discrepancy <= kMinorFormulaTolerance;

  if (n <= kExhaustiveMinorLimit) {
    v.method = PsdVerdict::Method::ExhaustiveMinors;
    v.worst_value = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      const auto subset = subset_from_mask(mask);
      const double m = principal_minor(w, subset);
      v.worst_value = std::min(v.worst_value, m);
      if (v.psd && m < -kMinorTolerance) {
        v.psd = false;
        v.witness_subset = subset;
      }
    }
    return v;
  }

  v.method = PsdVerdict::Method::Eigenvalue;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const auto& ev = solver.eigenvalues();
  Eigen::Index imin = 0;
  v.worst_value = ev.minCoeff(&imin);
  const double lmax = std::max(ev.maxCoeff(), 0.0);
  if (v.worst_value < -kPsdRelativeTolerance * lmax) {
    v.psd = false;
    v.witness_vector = solver.eigenvectors().col(imin);
  }
  return v;
}

CovarianceSumBounds covariance_sum_bounds(const CovarianceModel& model) {
  const std::size_t n = model.size();
  if (n < 2) throw InvalidInput("covariance_sum_bounds needs n >= 2");
  const double nd = static_cast<double>(n);
  const double total = model.profile().total();
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) cov += model.cov(i, j);
  }
  CovarianceSumBounds b;
  b.actual = 2.0 * cov / nd;
  b.lower = -total / nd;
  b.upper = (1.0 - 1.0 / nd) * total;
  const double tol = slack_tolerance(total);
  b.holds = b.actual >= b.lower - tol && b.actual <= b.upper + tol;
  return b;
}

}  // namespace varbound
