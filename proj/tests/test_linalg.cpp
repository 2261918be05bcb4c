#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "nilcone/linalg.hpp"

using namespace nilcone;

namespace {
Mat from(const FieldPtr& f, std::vector<Vec> rows) {
  return Mat::from_rows(f, rows, rows.empty() ? 0 : static_cast<int>(rows[0].size()));
}
}  // namespace

TEST_CASE("rank and kernel basics") {
  auto f2 = Field::make(2, 1);
  auto [r1, k1] = rank_kernel(Mat::identity(f2, 3));
  CHECK(r1 == 3);
  CHECK(k1.dim() == 0);

  auto [r2, k2] = rank_kernel(Mat::zero(f2, 2, 2));
  CHECK(r2 == 0);
  CHECK(k2.dim() == 2);

  auto m = from(f2, {{0, 1}, {0, 0}});
  auto [r3, k3] = rank_kernel(m);
  CHECK(r3 == 1);
  CHECK(k3.dim() == 1);
  CHECK(k3.contains(Vec{1, 0}));
  // M v = 0 for every kernel basis vector
  for (int i = 0; i < k3.dim(); ++i) CHECK(vec_is_zero(mat_vec(m, k3.basis().row(i))));
}

TEST_CASE("nilpotency") {
  auto f2 = Field::make(2, 1);
  CHECK(is_nilpotent(from(f2, {{0, 1, 1}, {0, 0, 1}, {0, 0, 0}})));
  CHECK_FALSE(is_nilpotent(Mat::identity(f2, 2)));
  auto f3 = Field::make(3, 1);
  CHECK(is_nilpotent(from(f3, {{1, 1}, {2, 2}})));  // squares to zero mod 3
}

TEST_CASE("annihilator dimensions") {
  auto f3 = Field::make(3, 1);
  auto whole = Subspace::full(f3, 4);
  CHECK(annihilator(whole).dim() == 0);
  auto zero = Subspace::zero(f3, 4);
  CHECK(annihilator(zero).dim() == 4);
  auto u = Subspace::span_rows(f3, {{1, 0, 2, 0}, {0, 1, 1, 1}}, 4);
  auto ann = annihilator(u);
  CHECK(ann.dim() == 2);
  for (int i = 0; i < ann.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j)
      CHECK(dot(f3, ann.basis().row(i), u.basis().row(j)) == 0);
}

TEST_CASE("double annihilator returns the subspace") {
  std::mt19937 rng(7);
  for (auto q : {2u, 3u}) {
    auto f = Field::make(q, 1);
    for (int trial = 0; trial < 40; ++trial) {
      int n = 1 + static_cast<int>(rng() % 6);
      int d = static_cast<int>(rng() % (n + 1));
      std::vector<Vec> rows;
      for (int i = 0; i < d; ++i) {
        Vec v(n);
        for (auto& x : v) x = rng() % q;
        rows.push_back(v);
      }
      auto u = Subspace::span_rows(f, rows, n);
      CHECK(annihilator(annihilator(u)) == u);
    }
  }
}

TEST_CASE("echelon canonicity, exhaustive at dim <= 3 over F2") {
  auto f2 = Field::make(2, 1);
  // every 3x3 F2 matrix: subspaces with equal point sets get equal representations
  std::map<std::set<std::uint32_t>, Subspace> seen;
  for (std::uint32_t code = 0; code < 512; ++code) {
    Mat m(f2, 3, 3);
    for (int i = 0; i < 9; ++i)
      if (code >> i & 1) m.at(i / 3, i % 3) = 1;
    auto s = Subspace::span(m);
    SubspaceElements elems(s);
    std::set<std::uint32_t> pts;
    for (std::uint64_t i = 0; i < elems.count(); ++i) {
      Vec v = elems.element(i);
      pts.insert(v[0] | v[1] << 1 | v[2] << 2);
    }
    auto it = seen.find(pts);
    if (it == seen.end())
      seen.emplace(pts, s);
    else
      CHECK(it->second == s);
  }
}

TEST_CASE("quotient map") {
  auto f2 = Field::make(2, 1);
  SUBCASE("by the zero subspace") {
    auto w = Subspace::full(f2, 2);
    auto q = quotient_map(w, Subspace::zero(f2, 2));
    CHECK(q.dim() == 2);
    CHECK(q.project(Vec{1, 1}) == Vec{1, 1});
  }
  SUBCASE("kills the sub") {
    auto w = Subspace::full(f2, 2);
    auto wp = Subspace::span_rows(f2, {{1, 0}}, 2);
    auto q = quotient_map(w, wp);
    CHECK(q.dim() == 1);
    CHECK(q.project(Vec{1, 0}) == Vec{0});
    CHECK(q.project(Vec{1, 1}) == Vec{1});
    // lift is a section
    CHECK(q.project(q.lift(Vec{1})) == Vec{1});
  }
  SUBCASE("not a subspace") {
    auto w = Subspace::span_rows(f2, {{1, 0, 0}}, 3);
    auto wp = Subspace::span_rows(f2, {{0, 1, 0}}, 3);
    CHECK_THROWS_AS(quotient_map(w, wp), Error);
  }
}

TEST_CASE("packed and generic reductions agree") {
  std::mt19937 rng(11);
  auto f2 = Field::make(2, 1);
  for (int trial = 0; trial < 200; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 6), cols = 1 + static_cast<int>(rng() % 8);
    Mat m(f2, rows, cols);
    for (auto& x : m.data()) x = rng() % 2;
    auto a = rref_generic(m);
    auto b = rref_packed2(m);
    CHECK(a.rank == b.rank);
    CHECK(a.mat == b.mat);
    CHECK(a.pivots == b.pivots);
  }
}

TEST_CASE("solve and inverse") {
  auto f5 = Field::make(5, 1);
  auto m = from(f5, {{1, 2}, {3, 4}});
  auto inv = inverse(m);
  REQUIRE(inv.has_value());
  CHECK(mat_mul(m, *inv) == Mat::identity(f5, 2));
  auto x = solve(m, Vec{1, 0});
  REQUIRE(x.has_value());
  CHECK(mat_vec(m, *x) == Vec{1, 0});
  // inconsistent system
  auto sing = from(f5, {{1, 1}, {2, 2}});
  CHECK_FALSE(solve(sing, Vec{1, 1}).has_value());
  CHECK_FALSE(inverse(sing).has_value());
  CHECK(det(sing) == 0);
  CHECK(det(m) == f5->sub(f5->mul(1, 4), f5->mul(2, 3)));
}

TEST_CASE("subspace enumeration counts match Gaussian binomials") {
  auto f2 = Field::make(2, 1);
  CHECK(all_subspaces(f2, 3, 1).size() == 7);
  CHECK(all_subspaces(f2, 3, 2).size() == 7);
  CHECK(all_subspaces(f2, 4, 2).size() == 35);
  auto f3 = Field::make(3, 1);
  CHECK(all_subspaces(f3, 4, 1).size() == 40);
  CHECK(all_subspaces(f3, 4, 2).size() == 130);
  // all distinct
  auto subs = all_subspaces(f2, 4, 2);
  std::set<Subspace> uniq(subs.begin(), subs.end());
  CHECK(uniq.size() == subs.size());
}

TEST_CASE("sum and intersection") {
  auto f2 = Field::make(2, 1);
  auto a = Subspace::span_rows(f2, {{1, 0, 0}, {0, 1, 0}}, 3);
  auto b = Subspace::span_rows(f2, {{0, 1, 0}, {0, 0, 1}}, 3);
  CHECK(subspace_sum(a, b).dim() == 3);
  auto c = subspace_intersect(a, b);
  CHECK(c.dim() == 1);
  CHECK(c.contains(Vec{0, 1, 0}));
}
