// One line per acceptance criterion; exit status 0 iff all pass.

#include <cstdio>
#include <string>
#include <vector>

#include "qcalc/selftest.hpp"

namespace qcalc::mutant {
std::string run_acceptance_json(const std::vector<int>& ids);
}

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  const auto results = qcalc::run_acceptance(ids, qcalc::kDefaultSeed, qcalc::mutant::run_acceptance_json);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("criterion %2d %-24s %s  metric=%.3e  threshold=%.3e  %s\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.metric, r.threshold, r.detail.c_str());
  }
  std::printf("%s\n", all ? "ALL PASS" : "FAILURES");
  return all ? 0 : 1;
}
