#include <cstdlib>
#include <iostream>

#include "hmf/selftest.hpp"

int main(int argc, char** argv) {
  uint64_t seed = 7;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  auto results = hmf::run_acceptance(seed, &std::cout);
  int passed = 0;
  for (const auto& r : results)
    if (r.pass) ++passed;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return hmf::all_passed(results) ? 0 : 1;
}
