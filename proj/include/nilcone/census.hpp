#pragma once

// Exhaustive enumeration and exact counting over small finite fields.
// Enumeration order is always the coefficient odometer (least significant
// digit first), recorded in every report; shard boundaries are contiguous
// index ranges, so results are independent of the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilcone/pieces.hpp"

namespace nilcone {

struct Budget {
  std::uint64_t max_enum = 1ull << 32;
  static Budget from_env();  // NILCONE_BUDGET overrides the default
};

/// q^dim, guarded by the budget.  Errors: BudgetExceeded.
std::uint64_t enum_size_checked(std::uint64_t q, int dim, const Budget& budget);

enum class CountTarget { Adjoint, Coadjoint };

struct CountReport {
  std::string kind;
  int rank = 0;
  std::uint64_t q = 0;
  std::string target;
  std::vector<std::pair<std::string, std::uint64_t>> counts;  // label -> count
  std::uint64_t total = 0;
  std::optional<std::uint64_t> expected;
  bool ok = true;
  std::uint64_t elapsed_ms = 0;
  int shards = 1;
  std::string order = "coeff-odometer-lsd-first";

  std::string to_json() const;
  std::string to_csv() const;  // one line per label
  static std::string csv_header();
  std::string to_table() const;
};

/// Exact nilpotent counts by full enumeration.  Coadjoint kind C runs through
/// the quadratic-form model; coadjoint kinds A and D use the Borel-vanishing
/// definition directly.  Errors: BudgetExceeded.
CountReport count_nilpotent(Kind kind, int rank, std::uint32_t q, CountTarget target,
                            const Budget& budget = Budget::from_env(), int shards = 0);

/// |{A : (Ax,x) = 0, A nilpotent}| by enumeration of that matrix space.
CountReport count_alternating_nilpotent(int r, std::uint32_t q,
                                        const Budget& budget = Budget::from_env(),
                                        int shards = 0);

/// Classifies every nilpotent form and counts the pieces.
CountReport piece_census(int r, std::uint32_t q, const Budget& budget = Budget::from_env(),
                         int shards = 0);

struct RatioResult {
  std::uint64_t zeta_count = 0;
  std::uint64_t distinguished_count = 0;
  int d = 0;
  bool ok = false;
};

/// Counts the filtration's compatible cone and the distinguished cone of its
/// graded model, and extracts the exact power q^d relating them.
/// Errors: BudgetExceeded, NonIntegralRatio.
RatioResult ratio_check(const Filtration& filt, const Budget& budget = Budget::from_env());

// ---- exact rational interpolation -------------------------------------------

struct Fraction {
  long long num = 0;
  long long den = 1;
  static Fraction of(long long n, long long d = 1);
  Fraction add(const Fraction& o) const;
  Fraction sub(const Fraction& o) const;
  Fraction mul(const Fraction& o) const;
  Fraction div(const Fraction& o) const;
  bool is_integer() const { return den == 1; }
  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
  std::string str() const;
};

struct PolyFitResult {
  bool consistent = false;
  std::vector<Fraction> coeffs;  // constant term first
  bool integer_coeffs = false;
};

/// Interpolates the first degree_bound+1 points exactly and checks the rest.
/// Errors: InsufficientPoints.
PolyFitResult poly_fit(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points,
                       int degree_bound);

// ---- cross checks ------------------------------------------------------------

struct BorelReport {
  std::uint64_t functionals = 0;
  std::uint64_t borels = 0;
  std::uint64_t agree = 0;
  std::uint64_t disagree = 0;
  std::vector<std::uint64_t> disagreement_indices;  // first few functional indices
};

/// Compares the Borel-vanishing definition of nilpotency with the polarized
/// form route for every rational functional on sp.  Reports disagreements
/// without asserting equivalence.  Errors: SizeLimitExceeded, BudgetExceeded.
BorelReport borel_cross_check(int r, std::uint32_t q, const Budget& budget = Budget::from_env());

/// Counts the nilpotent cone on both sides of the transport isomorphism
/// (matrix nilpotency vs Borel vanishing) and checks the transported image.
/// Errors: BudgetExceeded, WrongKind.
CountReport transport_census(Kind kind, int vdim, std::uint32_t q,
                             const Budget& budget = Budget::from_env());

/// Deterministic shard layout: contiguous [lo, hi) ranges covering [0, total).
std::vector<std::pair<std::uint64_t, std::uint64_t>> shard_ranges(std::uint64_t total,
                                                                  int shards);
int default_shards();

}  // namespace nilcone
