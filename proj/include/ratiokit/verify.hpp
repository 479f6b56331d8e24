#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ratiokit {

/// Outcome of one verification suite.  `detail` is a short quantitative
/// summary with fixed number formatting and no timings, so reports are
/// byte-identical across runs and thread counts for a fixed seed.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CriterionResult> results;
  bool all_passed() const;
  /// One line per suite: "criterion NN PASS|FAIL name: detail".
  std::string to_text() const;
};

struct VerifyOptions {
  std::uint64_t seed = 0x5EED;
  /// Worker threads handed to the Monte Carlo reductions; results are
  /// bitwise independent of this by construction.
  int threads = 1;
  /// Sample count for the Monte Carlo cross-checks.
  std::uint64_t mc_samples = 100000;
  /// Truncation order for the torus-series cross-check.  Lowering it
  /// never loosens the gate: the series either still meets its rigorous
  /// tail bound or refuses the evaluation.
  int series_order = 60;
};

/// Suite names in fixed order (one per acceptance criterion).
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite, a suite number ("1".."14"), or "all".
/// Throws ValueError for unknown suite names.
VerifyReport run_verification(const std::string& suite, const VerifyOptions& opts = {});

}  // namespace ratiokit
