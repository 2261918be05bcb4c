#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilcone/gf.hpp"

using namespace nilcone;

TEST_CASE("prime field construction") {
  auto f2 = Field::make(2, 1);
  CHECK(f2->size() == 2);
  CHECK(f2->modulus() == std::vector<fel>{0, 1});  // canonical degree-1 modulus x
  CHECK(f2->add(1, 1) == 0);
  CHECK(f2->mul(1, 1) == 1);

  auto f5 = Field::make(5, 1);
  CHECK(f5->add(3, 4) == 2);
  CHECK(f5->mul(3, 4) == 2);
  CHECK(f5->inv(3) == 2);
  CHECK(f5->neg(2) == 3);
}

TEST_CASE("non-prime p is rejected") {
  CHECK_THROWS_AS(Field::make(4, 1), Error);
  try {
    Field::make(4, 1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPrime);
  }
}

TEST_CASE("F4 uses the unique irreducible quadratic") {
  auto f4 = Field::make(2, 2);
  // x^2 + x + 1, constant term first
  CHECK(f4->modulus() == std::vector<fel>{1, 1, 1});
  // by exhaustion it is the only irreducible monic quadratic over F_2
  int count = 0;
  for (fel c0 = 0; c0 < 2; ++c0)
    for (fel c1 = 0; c1 < 2; ++c1)
      if (poly_irreducible({c0, c1, 1}, 2)) ++count;
  CHECK(count == 1);
  // x * x = x + 1  (indices: x = 2, x+1 = 3)
  CHECK(f4->mul(2, 2) == 3);
}

TEST_CASE("inverse of zero") {
  auto f4 = Field::make(2, 2);
  CHECK_THROWS_AS(f4->inv(0), Error);
  try {
    f4->inv(0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DivisionByZero);
  }
}

TEST_CASE("size limit") {
  CHECK_THROWS_AS(Field::make(2, 25), Error);
  try {
    Field::make(2, 25);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SizeLimitExceeded);
  }
}

static void check_axioms(const FieldPtr& f) {
  const std::uint32_t q = f->size();
  REQUIRE(q <= 256);
  for (fel a = 0; a < q; ++a) {
    CHECK(f->add(a, 0) == a);
    CHECK(f->mul(a, 1) == a);
    CHECK(f->add(a, f->neg(a)) == 0);
    if (a != 0) {
      CHECK(f->mul(a, f->inv(a)) == 1);
      CHECK(f->pow(a, static_cast<long long>(q) - 1) == 1);
    }
  }
  for (fel a = 0; a < q; ++a)
    for (fel b = 0; b < q; ++b) {
      CHECK(f->add(a, b) == f->add(b, a));
      CHECK(f->mul(a, b) == f->mul(b, a));
      for (fel c = 0; c < q; ++c) {
        CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
        CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
        CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      }
    }
}

TEST_CASE("field axioms, exhaustive up to 256") {
  for (auto [p, k] : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}, {2, 3}, {3, 2}, {5, 1},
                      {7, 1}, {2, 4}, {13, 1}}) {
    check_axioms(Field::make(p, k));
  }
}

TEST_CASE("Frobenius is additive") {
  for (auto [p, k] : {std::pair<int, int>{2, 3}, {3, 2}, {2, 4}, {5, 1}}) {
    auto f = Field::make(p, k);
    for (fel a = 0; a < f->size(); ++a)
      for (fel b = 0; b < f->size(); ++b)
        CHECK(f->pow(f->add(a, b), p) == f->add(f->pow(a, p), f->pow(b, p)));
  }
}

TEST_CASE("extension embeds the prime field") {
  auto f2 = Field::make(2, 1);
  auto ext = extend(f2, 2);
  CHECK(ext.big->size() == 4);
  CHECK(ext.embed[0] == 0);
  CHECK(ext.embed[1] == 1);
}

TEST_CASE("extension embedding is a ring homomorphism, exhaustively") {
  auto f4 = Field::make(2, 2);
  auto ext = extend(f4, 2);
  CHECK(ext.big->size() == 16);
  const Field& big = *ext.big;
  for (fel a = 0; a < 4; ++a) {
    for (fel b = 0; b < 4; ++b) {
      CHECK(ext.embed[f4->add(a, b)] == big.add(ext.embed[a], ext.embed[b]));
      CHECK(ext.embed[f4->mul(a, b)] == big.mul(ext.embed[a], ext.embed[b]));
    }
    for (fel b = a + 1; b < 4; ++b) CHECK(ext.embed[a] != ext.embed[b]);
  }
}

TEST_CASE("extension past the size cap fails") {
  auto f2 = Field::make(2, 1);
  CHECK_THROWS_AS(extend(f2, 25), Error);
}

TEST_CASE("sqrt in characteristic 2") {
  auto f8 = Field::make(2, 3);
  for (fel a = 0; a < 8; ++a) {
    fel s = f8->sqrt2(a);
    CHECK(f8->mul(s, s) == a);
  }
}

TEST_CASE("tagged facade enforces field identity") {
  auto f2 = Field::make(2, 1);
  auto f3 = Field::make(3, 1);
  TaggedElem a{f2, 1}, b{f3, 1};
  CHECK_THROWS_AS(arith(ArithOp::Add, a, b), Error);
  try {
    arith(ArithOp::Add, a, b);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FieldMismatch);
  }
  auto f2b = Field::make(2, 1);  // same arithmetic, distinct object
  TaggedElem c{f2b, 1};
  CHECK(arith(ArithOp::Add, a, c).v == 0);
  CHECK(arith_pow(TaggedElem{f3, 2}, -1).v == 2);
}
