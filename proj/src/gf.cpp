#include "nilcone/gf.hpp"

#include <algorithm>

namespace nilcone {

namespace {

using poly = std::vector<fel>;  // constant term first, no trailing zeros unless monic storage

poly trim(poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

poly pmul(const poly& a, const poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<fel>((c[i + j] + (std::uint64_t)a[i] * b[j]) % p);
  return trim(c);
}

// remainder of a modulo monic m
poly pmod(poly a, const poly& m, std::uint32_t p) {
  a = trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    fel lead = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dm; ++i) {
        std::uint64_t sub = (std::uint64_t)lead * m[i] % p;
        fel& t = a[shift + i];
        t = static_cast<fel>((t + p - sub) % p);
      }
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.size() <= dm) break;
  }
  return a;
}

bool pdivides(const poly& d, const poly& f, std::uint32_t p) {
  return pmod(f, d, p).empty();
}

poly pmulmod(const poly& a, const poly& b, const poly& m, std::uint32_t p) {
  return pmod(pmul(a, b, p), m, p);
}

poly idx_to_poly(std::uint64_t idx, std::uint32_t p) {
  poly c;
  while (idx) {
    c.push_back(static_cast<fel>(idx % p));
    idx /= p;
  }
  return c;
}

fel poly_to_idx(const poly& c, std::uint32_t p) {
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
  return static_cast<fel>(v);
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; (std::uint64_t)d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

poly ppowmod(poly base, std::uint64_t e, const poly& m, std::uint32_t p) {
  poly r = {1};
  while (e) {
    if (e & 1) r = pmulmod(r, base, m, p);
    base = pmulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; (std::uint64_t)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool poly_irreducible(const std::vector<fel>& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg == 0) return false;
  if (deg == 1) return true;
  // trial division by every monic polynomial of degree 1..deg/2
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      poly g = idx_to_poly(idx, p);
      g.resize(d + 1, 0);
      g[d] = 1;
      if (pdivides(g, f, p)) return false;
    }
  }
  return true;
}

FieldPtr Field::make(std::uint32_t p, std::uint32_t k) {
  require(is_prime_u32(p), Errc::NonPrime, "p must be prime");
  require(p <= 64, Errc::SizeLimitExceeded, "p must be <= 64");
  require(k >= 1, Errc::Precondition, "k must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    require(q <= kMaxSize, Errc::SizeLimitExceeded, "p^k exceeds 2^20");
  }
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->k_ = k;
  f->q_ = static_cast<std::uint32_t>(q);
  f->qm1_ = f->q_ - 1;
  // smallest monic irreducible of degree k: scan constant-first tuples as base-p integers
  std::uint64_t span = q;  // p^k candidate lower parts
  for (std::uint64_t idx = 0; idx < span; ++idx) {
    poly cand = idx_to_poly(idx, p);
    cand.resize(k + 1, 0);
    cand[k] = 1;
    if (poly_irreducible(cand, p)) {
      f->modulus_ = cand;
      break;
    }
  }
  require(!f->modulus_.empty(), Errc::InternalCheck, "no irreducible modulus found");
  f->build();
  return f;
}

void Field::build() {
  if (k_ == 1) return;  // direct modular arithmetic
  // find the multiplicative generator with the smallest index
  auto factors = prime_factors(qm1_);
  poly gen;
  for (fel g = 2; g < q_; ++g) {
    poly gp = idx_to_poly(g, p_);
    bool ok = true;
    for (auto ell : factors)
      if (ppowmod(gp, qm1_ / ell, modulus_, p_) == poly{1}) {
        ok = false;
        break;
      }
    if (ok) {
      gen = gp;
      break;
    }
  }
  require(!gen.empty(), Errc::InternalCheck, "no multiplicative generator found");
  exp_.assign(qm1_, 0);
  log_.assign(q_, 0);
  poly cur = {1};
  for (std::uint32_t i = 0; i < qm1_; ++i) {
    fel idx = poly_to_idx(cur, p_);
    exp_[i] = idx;
    log_[idx] = i;
    cur = pmulmod(cur, gen, modulus_, p_);
  }
}

fel Field::add_digits(fel a, fel b) const {
  fel out = 0, mult = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    fel s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * mult;
    mult *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

fel Field::neg_digits(fel a) const {
  fel out = 0, mult = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    fel d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * mult;
    mult *= p_;
    a /= p_;
  }
  return out;
}

fel Field::pow(fel a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  fel r = 1, base = a;
  std::uint64_t ue = static_cast<std::uint64_t>(e);
  while (ue) {
    if (ue & 1) r = mul(r, base);
    base = mul(base, base);
    ue >>= 1;
  }
  return r;
}

fel Field::from_coeffs(const std::vector<fel>& c) const {
  require(c.size() == k_, Errc::Precondition, "coefficient vector length must equal k");
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    require(c[i] < p_, Errc::Precondition, "coefficient out of range");
    v = v * p_ + c[i];
  }
  return static_cast<fel>(v);
}

std::string Field::str(fel a) const {
  if (k_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  std::string out;
  for (std::uint32_t i = k_; i-- > 0;) {
    fel c = coeff(a, i);
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c) + "*";
      out += (i == 1) ? "x" : "x^" + std::to_string(i);
    }
  }
  return out;
}

FieldExtension extend(const FieldPtr& base, std::uint32_t m) {
  require(m >= 2, Errc::Precondition, "extension degree must be >= 2");
  FieldExtension ext;
  ext.degree = m;
  ext.big = Field::make(base->p(), base->k() * m);  // SizeLimitExceeded bubbles up
  const Field& B = *ext.big;
  // root of the base modulus in the big field, smallest index first
  const auto& mod = base->modulus();
  fel root = 0;
  bool found = false;
  for (fel b = 0; b < B.size(); ++b) {
    fel acc = 0;
    for (std::size_t i = mod.size(); i-- > 0;) acc = B.add(B.mul(acc, b), B.from_int(mod[i]));
    if (acc == 0) {
      root = b;
      found = true;
      break;
    }
  }
  require(found, Errc::InternalCheck, "base modulus has no root in the extension");
  ext.embed.assign(base->size(), 0);
  for (fel a = 0; a < base->size(); ++a) {
    fel acc = 0, rpow = 1;
    for (std::uint32_t i = 0; i < base->k(); ++i) {
      acc = B.add(acc, B.mul(B.from_int(base->coeff(a, i)), rpow));
      rpow = B.mul(rpow, root);
    }
    ext.embed[a] = acc;
  }
  return ext;
}

FieldPtr field_from_order(std::uint64_t q) {
  require(q >= 2 && q <= Field::kMaxSize, Errc::SizeLimitExceeded, "order out of bounds");
  std::uint64_t p = q;  // smallest prime factor
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  std::uint32_t k = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  require(rest == 1, Errc::NonPrime, "order is not a prime power");
  return Field::make(static_cast<std::uint32_t>(p), k);
}

std::vector<fel> compose_embeddings(const std::vector<fel>& first,
                                    const std::vector<fel>& second) {
  std::vector<fel> out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

TaggedElem arith(ArithOp op, const TaggedElem& a, const TaggedElem& b) {
  require(a.field && b.field && a.field->same(*b.field), Errc::FieldMismatch,
          "operands belong to different fields");
  const Field& f = *a.field;
  switch (op) {
    case ArithOp::Add: return {a.field, f.add(a.v, b.v)};
    case ArithOp::Mul: return {a.field, f.mul(a.v, b.v)};
    case ArithOp::Inv: return {a.field, f.inv(a.v)};
    case ArithOp::Pow: return {a.field, f.pow(a.v, static_cast<long long>(b.v))};
  }
  fail(Errc::Precondition, "unknown op");
}

TaggedElem arith_pow(const TaggedElem& a, long long e) {
  require(a.field != nullptr, Errc::Precondition, "null field");
  return {a.field, a.field->pow(a.v, e)};
}

}  // namespace nilcone
