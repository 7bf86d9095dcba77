#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "varbound/model.hpp"
#include "varbound/numeric.hpp"

namespace varbound {

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Acceptance criteria, one result per criterion.
std::vector<CheckResult> run_acceptance(unsigned workers = 1);

/// Invariant and property suites of every module.
std::vector<CheckResult> run_properties(unsigned workers = 1);

/// "PASS [id] title (1.23 s): detail"
std::string format_check(const CheckResult& check);

/// Random instance generators for property suites. All draw from the engine
/// they are handed, so callers partition seeds per instance.
namespace gen {

std::vector<double> simplex_weights(std::size_t n, Engine& rng);
std::vector<double> sub_simplex_weights(std::size_t n, Engine& rng);
std::vector<double> uniform_vector(std::size_t n, double lo, double hi, Engine& rng);
std::size_t uniform_size(std::size_t lo, std::size_t hi, Engine& rng);

}  // namespace gen

}  // namespace varbound
