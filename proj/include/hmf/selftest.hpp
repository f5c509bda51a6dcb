#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hmf/qexp.hpp"

namespace hmf {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

// Runs the full acceptance suite; one result per criterion.  When `log` is
// given, a pass/fail line is printed per criterion.
std::vector<CriterionResult> run_acceptance(uint64_t seed,
                                            std::ostream* log = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

// The demo coefficient-system contexts shipped under configs/.
extern const char* kDemoConfigD3;
extern const char* kDemoConfigD5;
extern const char* kDemoConfigD2;
QexpContextPtr demo_context_d3(bool level_v5 = false);
QexpContextPtr demo_context_d5();
QexpContextPtr demo_context_d2();

}  // namespace hmf
