#pragma once

// The acceptance suite: every check the project must pass, runnable both from
// the test harness and from the command line.  Each item prints one PASS/FAIL
// line; items whose enumeration exceeds the budget are reported as SKIP.

#include <iosfwd>
#include <string>
#include <vector>

#include "nilcone/census.hpp"

namespace nilcone {

struct VerifyOptions {
  Budget budget = Budget::from_env();
  int shards = 0;          // 0: pick automatically
  std::uint64_t seed = 12345;  // randomized sigma suite
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

/// Runs all acceptance checks; if `progress` is nonnull, one line per item is
/// streamed as it completes.
std::vector<CheckResult> run_verification(const VerifyOptions& opts,
                                          std::ostream* progress = nullptr);

/// True iff nothing failed (skips do not fail the run).
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace nilcone
