#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sbf {

struct SuiteLine {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;  // 0: no time limit
};

struct SuiteOptions {
  std::string level = "desk";  // "desk": full scope; "quick": reduced sizes, same checks
  std::uint64_t seed = 20240611;
  long vertex_cap = 2'000'000;
  long group_cap = 10'000'000;
  std::vector<int> only;  // criterion ids to run; empty runs all
  std::function<void(const SuiteLine&)> on_line;
};

// The acceptance battery, one line per criterion in id order.
std::vector<SuiteLine> run_suite(const SuiteOptions& opt);

}  // namespace sbf
