#include <algorithm>
#include <iostream>
#include <thread>

#include "varbound/verify.hpp"

int main() {
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  const auto results = varbound::run_acceptance(workers);
  std::size_t passed = 0;
  for (const auto& r : results) {
    std::cout << varbound::format_check(r) << '\n';
    if (r.passed) ++passed;
  }
  std::cout << passed << "/" << results.size() << " acceptance criteria passed\n";
  return passed == results.size() ? 0 : 1;
}
