#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpq {

struct SelftestOptions {
  bool reduced = false;       // signal grid at half the sampling density
  bool corrupt_dual = false;  // fault injection into the dual coefficients of the generator suite
};

struct SuiteResult {
  std::string name;
  int passed = 0, total = 0;
  bool ok() const { return passed == total; }
};

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt, std::ostream& log);

}  // namespace lpq
