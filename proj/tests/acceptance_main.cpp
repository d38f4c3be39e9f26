#include "sbf/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance [--quick] [criterion ids...]
int main(int argc, char** argv) {
  sbf::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0)
      opt.level = "quick";
    else
      opt.only.push_back(std::atoi(argv[i]));
  }
  opt.on_line = [](const sbf::SuiteLine& l) {
    std::printf("%s criterion %d: %s [%.1fs", l.pass ? "PASS" : "FAIL", l.id, l.name.c_str(), l.seconds);
    if (l.limit_seconds > 0) std::printf(" / limit %.0fs", l.limit_seconds);
    std::printf("] %s\n", l.detail.c_str());
    std::fflush(stdout);
  };
  int failed = 0;
  for (const auto& l : sbf::run_suite(opt)) failed += !l.pass;
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
