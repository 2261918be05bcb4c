#pragma once

// Exact arithmetic in small finite fields F_{p^k}, p prime <= 64, p^k <= 2^20.
//
// Elements are represented by their index in [0, p^k): the index encodes the
// coefficient vector (c_0, ..., c_{k-1}) of the element as a polynomial in the
// generator, read as a base-p integer with c_0 least significant.  For p = 2
// this makes addition a plain XOR of indices.
//
// The reducing modulus is the lexicographically smallest monic irreducible
// polynomial of degree k over F_p, where "lexicographically smallest" compares
// the coefficient tuple (c_0, ..., c_{k-1}) read as a base-p integer.  This
// makes field construction reproducible bit for bit across runs and languages.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nilcone/error.hpp"

namespace nilcone {

using fel = std::uint32_t;  // field element index

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static constexpr std::uint64_t kMaxSize = 1u << 20;

  /// Builds F_{p^k} with the canonical modulus.  Errors: NonPrime, SizeLimitExceeded.
  static FieldPtr make(std::uint32_t p, std::uint32_t k);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t size() const { return q_; }
  /// Monic modulus, k+1 coefficients, constant term first.  For k = 1 this is x.
  const std::vector<fel>& modulus() const { return modulus_; }

  bool same(const Field& o) const {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
  }

  fel add(fel a, fel b) const {
    if (p_ == 2) return a ^ b;
    if (k_ == 1) {
      fel s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return add_digits(a, b);
  }

  fel neg(fel a) const {
    if (p_ == 2) return a;
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_digits(a);
  }

  fel sub(fel a, fel b) const { return add(a, neg(b)); }

  fel mul(fel a, fel b) const {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return static_cast<fel>((std::uint64_t)a * b % p_);
    std::uint32_t s = log_[a] + log_[b];
    if (s >= qm1_) s -= qm1_;
    return exp_[s];
  }

  /// Errors: DivisionByZero.
  fel inv(fel a) const {
    require(a != 0, Errc::DivisionByZero, "inverse of 0");
    if (k_ == 1) return pow(a, static_cast<long long>(p_) - 2);
    std::uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : qm1_ - l];
  }

  /// a^e with e any integer; 0^0 = 1, negative exponents invert first.
  fel pow(fel a, long long e) const;

  /// Square root, p = 2 only (Frobenius is bijective).
  fel sqrt2(fel a) const {
    require(p_ == 2, Errc::Precondition, "sqrt2 requires characteristic 2");
    return pow(a, static_cast<long long>(q_) / 2);
  }

  fel one() const { return 1; }
  fel from_int(std::uint64_t v) const { return static_cast<fel>(v % p_); }

  fel coeff(fel a, std::uint32_t i) const {
    for (std::uint32_t t = 0; t < i; ++t) a /= p_;
    return a % p_;
  }
  fel from_coeffs(const std::vector<fel>& c) const;

  std::string str(fel a) const;

 private:
  Field() = default;
  void build();

  std::uint32_t p_ = 0, k_ = 0, q_ = 0, qm1_ = 0;
  std::vector<fel> modulus_;
  std::vector<std::uint32_t> exp_, log_;  // Zech tables, k > 1 only

  fel add_digits(fel a, fel b) const;
  fel neg_digits(fel a) const;
};

/// Result of a field extension: the bigger field plus an injective ring
/// homomorphism given as a table over the base field's elements.
struct FieldExtension {
  FieldPtr big;
  std::vector<fel> embed;  // size base->size()
  std::uint32_t degree = 1;
};

/// F_{p^k} -> F_{p^{km}}, m >= 2.  The embedding sends the base generator to
/// the smallest-index root of the base modulus in the big field.
/// Errors: SizeLimitExceeded, Precondition.
FieldExtension extend(const FieldPtr& base, std::uint32_t m);

/// Factors q = p^k and builds the canonical field of that order.
/// Errors: NonPrime (q is not a prime power), SizeLimitExceeded.
FieldPtr field_from_order(std::uint64_t q);

/// Composes two embedding tables (base -> mid -> big).
std::vector<fel> compose_embeddings(const std::vector<fel>& first,
                                    const std::vector<fel>& second);

// ---- facade with field-tagged elements, used at API boundaries and in tests

struct TaggedElem {
  FieldPtr field;
  fel v = 0;
};

enum class ArithOp { Add, Mul, Inv, Pow };

/// Errors: FieldMismatch, DivisionByZero.
TaggedElem arith(ArithOp op, const TaggedElem& a, const TaggedElem& b);
TaggedElem arith_pow(const TaggedElem& a, long long e);

// ---- small polynomial helpers over F_p (used by construction and tests)

bool is_prime_u32(std::uint32_t n);
/// Monic polynomial irreducibility over F_p by trial division; poly has
/// constant term first and leading coefficient 1.
bool poly_irreducible(const std::vector<fel>& poly, std::uint32_t p);

}  // namespace nilcone
