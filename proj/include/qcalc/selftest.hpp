#pragma once

// Built-in acceptance suite on fixed fixtures.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcalc/namespace.hpp"

QCALC_NS_BEGIN

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Worst observed value of the checked quantity.
  double metric = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Runs the suite in another build and returns its JSON report; used by the
/// mutation-sensitivity check.
using VariantSuite = std::function<std::string(const std::vector<int>&)>;

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr int kCriterionCount = 13;

/// Runs the listed criteria (all when empty). Criterion 13 needs `variant`;
/// without it the entry fails with an explanation.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            std::uint64_t seed = kDefaultSeed,
                                            const VariantSuite& variant = {});

/// JSON report {"seed", "criteria": [...], "pass"}.
std::string acceptance_json(const std::vector<CriterionResult>& results, std::uint64_t seed);

/// run_acceptance with the default seed and no variant, as JSON.
std::string run_acceptance_json(const std::vector<int>& ids);

QCALC_NS_END
