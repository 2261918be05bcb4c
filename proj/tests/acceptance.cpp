// Acceptance suite: runs every verification item and prints one line each.
// Exits nonzero if anything fails (budget skips are reported, not failed).

#include <iostream>

#include "nilcone/verify.hpp"

int main() {
  nilcone::VerifyOptions opts;
  auto results = nilcone::run_verification(opts, &std::cout);
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : results) {
    if (r.skipped)
      ++skipped;
    else if (r.pass)
      ++passed;
    else
      ++failed;
  }
  std::cout << "\n" << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return failed == 0 ? 0 : 1;
}
