#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "varbound/processes.hpp"

namespace oracle {

inline long double determinant(std::vector<std::vector<long double>> m) {
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

/// a' Sigma a with Sigma_ij = rho_ij s_i s_j, summed in long double.
inline long double quadratic_form(const std::vector<double>& a, const std::vector<double>& var,
                                  const std::vector<std::vector<double>>& rho) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      s += static_cast<long double>(a[i]) * a[j] * rho[i][j] * std::sqrt(static_cast<long double>(var[i])) *
           std::sqrt(static_cast<long double>(var[j]));
    }
  }
  return s;
}

inline long double var_of_mean(const varbound::ProcessModel& p, std::size_t n) {
  long double s = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) s += varbound::kernel_cov(p, i, j);
  }
  return s / (static_cast<long double>(n) * n);
}

struct GridCount {
  std::uint64_t total = 0;
  std::uint64_t greater = 0;
  std::uint64_t ties = 0;
};

/// Integer enumeration of D * sum a_i v_i against (sum a_i^2)(sum v_i),
/// weights a_i in 1..D summing to D, variances v_i in 1..S.
inline GridCount integer_grid(std::size_t n, int D = 10, int S = 20) {
  GridCount out;
  std::vector<int> a(n, 1);
  std::vector<int> v(n, 1);
  auto visit_variances = [&](auto&& self, std::size_t k, std::int64_t dot, std::int64_t sum, std::int64_t sq) -> void {
    if (k == n) {
      ++out.total;
      const std::int64_t lhs = D * dot;
      const std::int64_t rhs = sq * sum;
      if (lhs > rhs) ++out.greater;
      if (lhs == rhs) ++out.ties;
      return;
    }
    for (int x = 1; x <= S; ++x) self(self, k + 1, dot + a[k] * x, sum + x, sq);
  };
  auto visit_weights = [&](auto&& self, std::size_t k, int left) -> void {
    if (k + 1 == n) {
      a[k] = left;
      std::int64_t sq = 0;
      for (int x : a) sq += x * x;
      visit_variances(visit_variances, 0, 0, 0, sq);
      return;
    }
    for (int x = 1; x <= left - static_cast<int>(n - k - 1); ++x) {
      a[k] = x;
      self(self, k + 1, left - x);
    }
  };
  visit_weights(visit_weights, 0, D);
  return out;
}

}  // namespace oracle
