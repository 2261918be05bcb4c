#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "nilcone/forms.hpp"

using namespace nilcone;

namespace {
QuadForm form2(const SpacePtr& sp, std::vector<fel> c) { return QuadForm(sp, std::move(c)); }
}  // namespace

TEST_CASE("polarization on the standard plane") {
  auto f2 = Field::make(2, 1);
  auto sp = standard_symplectic(f2, 1);
  // coeffs (q11, q12, q22)
  CHECK(form2(sp, {0, 0, 0}).polarize().is_zero());
  CHECK(form2(sp, {0, 1, 0}).polarize() == Mat::identity(f2, 2));  // x1 x2
  CHECK(form2(sp, {1, 0, 0}).polarize().is_zero());                // x1^2, squares die at p=2
  // defining identity (A_Q x, y) = Q(x+y) - Q(x) - Q(y), all pairs
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto q = QuadForm::from_index(sp, i);
    Mat a = q.polarize();
    for (std::uint32_t xc = 0; xc < 4; ++xc)
      for (std::uint32_t yc = 0; yc < 4; ++yc) {
        Vec x{xc & 1, xc >> 1}, y{yc & 1, yc >> 1};
        CHECK(sp->pair(mat_vec(a, x), y) == q.bilinear(x, y));
      }
  }
}

TEST_CASE("polarize is linear, r=1 q=2") {
  auto f2 = Field::make(2, 1);
  auto sp = standard_symplectic(f2, 1);
  for (std::uint64_t i = 0; i < 8; ++i)
    for (std::uint64_t j = 0; j < 8; ++j) {
      auto qi = QuadForm::from_index(sp, i), qj = QuadForm::from_index(sp, j);
      CHECK(qi.add(qj).polarize() == mat_add(qi.polarize(), qj.polarize()));
    }
}

TEST_CASE("kernel of polarize is the span of the squares") {
  auto f2 = Field::make(2, 1);
  for (int r = 1; r <= 2; ++r) {
    auto sp = standard_symplectic(f2, r);
    const int d = QuadForm::coeff_count(2 * r);
    std::uint64_t total = 1ull << d, in_kernel = 0;
    for (std::uint64_t i = 0; i < total; ++i) {
      auto q = QuadForm::from_index(sp, i);
      if (!q.polarize().is_zero()) continue;
      ++in_kernel;
      // a diagonal form: off-diagonal coefficients vanish
      for (int a = 0; a < 2 * r; ++a)
        for (int b = a + 1; b < 2 * r; ++b) CHECK(q.coeff(a, b) == 0);
    }
    CHECK(in_kernel == (1ull << (2 * r)));
  }
}

TEST_CASE("sigma is a linear bijection with the right dimension") {
  auto f2 = Field::make(2, 1);
  auto sp2 = build_algebra(Kind::C, 2, f2);
  auto space = standard_symplectic(f2, 1);
  CHECK(sp2.dim() == QuadForm::coeff_count(2));
  // round trip both ways, exhaustively at r=1, q=2
  std::set<std::vector<fel>> images;
  for (std::uint64_t code = 0; code < 8; ++code) {
    Vec c{static_cast<fel>(code & 1), static_cast<fel>((code >> 1) & 1),
          static_cast<fel>((code >> 2) & 1)};
    DualFunctional xi{&sp2, c};
    auto q = sigma_to_form(sp2, space, xi);
    images.insert(q.coeffs());
    auto back = sigma_from_form(sp2, q);
    CHECK(back.coeffs == xi.coeffs);
  }
  CHECK(images.size() == 8);
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto q = QuadForm::from_index(space, i);
    auto xi = sigma_from_form(sp2, q);
    CHECK(sigma_to_form(sp2, space, xi).coeffs() == q.coeffs());
  }
}

TEST_CASE("sigma is Sp-equivariant, exhaustive r=1 q=2") {
  auto f2 = Field::make(2, 1);
  auto sp2 = build_algebra(Kind::C, 2, f2);
  auto space = standard_symplectic(f2, 1);
  auto group = enumerate_group(Kind::C, 2, f2);
  for (const Mat& g : group) {
    auto gi = *inverse(g);
    for (std::uint64_t code = 0; code < 8; ++code) {
      Vec c{static_cast<fel>(code & 1), static_cast<fel>((code >> 1) & 1),
            static_cast<fel>((code >> 2) & 1)};
      DualFunctional xi{&sp2, c};
      auto lhs = sigma_to_form(sp2, space, coadjoint_act(sp2, g, xi));
      auto rhs = sigma_to_form(sp2, space, xi).compose(gi);
      CHECK(lhs.coeffs() == rhs.coeffs());
    }
  }
}

TEST_CASE("nilpotent dual functionals, r=1 q=2") {
  auto f2 = Field::make(2, 1);
  auto sp2 = build_algebra(Kind::C, 2, f2);
  auto space = standard_symplectic(f2, 1);
  DualFunctional zero{&sp2, Vec(3, 0)};
  CHECK(nilpotent_dual_test(sp2, space, zero));
  int count = 0;
  for (std::uint64_t code = 0; code < 8; ++code) {
    Vec c{static_cast<fel>(code & 1), static_cast<fel>((code >> 1) & 1),
          static_cast<fel>((code >> 2) & 1)};
    DualFunctional xi{&sp2, c};
    if (nilpotent_dual_test(sp2, space, xi)) ++count;
  }
  CHECK(count == 4);  // q^{2 r^2}
  // xi corresponding to x1 x2 polarizes to the identity
  auto xi = sigma_from_form(sp2, form2(space, {0, 1, 0}));
  CHECK_FALSE(nilpotent_dual_test(sp2, space, xi));
}

TEST_CASE("even kernel dimension for nilpotent forms at p=2") {
  auto f2 = Field::make(2, 1);
  for (int r = 1; r <= 2; ++r) {
    auto sp = standard_symplectic(f2, r);
    const int d = QuadForm::coeff_count(2 * r);
    for (std::uint64_t i = 0; i < (1ull << d); ++i) {
      auto q = QuadForm::from_index(sp, i);
      Mat a = q.polarize();
      if (!is_nilpotent(a)) continue;
      CHECK(kernel(a).dim() % 2 == 0);
    }
  }
}

TEST_CASE("good basis base cases") {
  auto f2 = Field::make(2, 1);
  SUBCASE("empty space") {
    auto sp = standard_symplectic(f2, 0);
    auto gb = good_basis(QuadForm::zero(sp));
    CHECK(gb.vectors.rows() == 0);
    CHECK(good_basis_check(QuadForm::zero(sp), gb));
  }
  SUBCASE("x1^2 at r=1") {
    auto sp = standard_symplectic(f2, 1);
    auto q = form2(sp, {1, 0, 0});
    auto gb = good_basis(q);
    CHECK(gb.ext_degree == 1);
    CHECK(gb.vectors.row(1) == Vec{0, 1});  // e_1 spans the zero set of x1^2
    CHECK(gb.vectors.row(0) == Vec{1, 0});
    CHECK(good_basis_check(q, gb));
  }
  SUBCASE("non-nilpotent input is rejected") {
    auto sp = standard_symplectic(f2, 1);
    CHECK_THROWS_AS(good_basis(form2(sp, {0, 1, 0})), Error);
  }
}

TEST_CASE("good basis succeeds on every nilpotent form, r<=2, q in {2,3}") {
  for (auto [p, check_all] : {std::pair<int, bool>{2, true}, {3, true}}) {
    auto f = Field::make(p, 1);
    for (int r = 1; r <= 2; ++r) {
      auto sp = standard_symplectic(f, r);
      const int d = QuadForm::coeff_count(2 * r);
      std::uint64_t total = 1;
      for (int i = 0; i < d; ++i) total *= p;
      for (std::uint64_t i = 0; i < total; ++i) {
        auto q = QuadForm::from_index(sp, i);
        if (!is_nilpotent(q.polarize())) continue;
        auto gb = good_basis(q);
        std::string why;
        bool ok = good_basis_check(q, gb, &why);
        if (!ok) INFO("form ", i, " failed: ", why);
        REQUIRE(ok);
      }
    }
  }
}

TEST_CASE("isotropic search extends the field on anisotropic binary forms") {
  auto f2 = Field::make(2, 1);
  // x^2 + xy + y^2, the norm form of F4 over F2: anisotropic rationally
  auto found = find_isotropic(f2, 2, {1, 1, 1}, 8);
  CHECK(found.ext_degree == 2);
  CHECK(found.field->size() == 4);
  // the returned vector is isotropic over the extension
  const Field& big = *found.field;
  fel x = found.vector[0], y = found.vector[1];
  fel val = big.add(big.add(big.mul(x, x), big.mul(x, y)), big.mul(y, y));
  CHECK(val == 0);
  CHECK_FALSE(vec_is_zero(found.vector));
  // with a cap of 1 the search fails loudly
  CHECK_THROWS_AS(find_isotropic(f2, 2, {1, 1, 1}, 1), Error);
}

TEST_CASE("fiber counts over F2") {
  auto f2 = Field::make(2, 1);
  SUBCASE("r=1") {
    auto sp = standard_symplectic(f2, 1);
    CHECK(fiber_count(sp, Mat::zero(f2, 2, 2)) == 4);
    CHECK(fiber_count(sp, Mat::identity(f2, 2)) == 4);
    // cross-check by enumeration: polarize all 8 forms
    std::map<std::vector<fel>, int> fibers;
    for (std::uint64_t i = 0; i < 8; ++i) fibers[QuadForm::from_index(sp, i).polarize().data()]++;
    for (auto& [a, cnt] : fibers) CHECK(cnt == 4);
    // non-alternating input
    Mat bad(f2, 2, 2);
    bad.at(0, 1) = 1;  // (A e1, e1) = (e2-ish...) pairing nonzero
    bad.at(0, 0) = 0;
    Mat notalt(f2, 2, 2);
    notalt.at(0, 0) = 1;  // A = E11: (A e1, e1) = (e1, e1) = 0; try E12
    Mat e12(f2, 2, 2);
    e12.at(0, 1) = 1;  // A e2 = e1, (A e2, e2) = (e1, e2) = 1 != 0
    CHECK_THROWS_AS(fiber_count(sp, e12), Error);
  }
  SUBCASE("r=2, zero matrix") {
    auto sp = standard_symplectic(f2, 2);
    CHECK(fiber_count(sp, Mat::zero(f2, 4, 4)) == 16);
  }
}

TEST_CASE("subquotient form matches direct evaluation") {
  auto f3 = Field::make(3, 1);
  auto sp = standard_symplectic(f3, 2);
  // Q = x1 x2, A_Q nilpotent; take v = e4 in ker A
  auto q = QuadForm(sp, std::vector<fel>{0, 1, 0, 0, 0, 0, 0, 0, 0, 0});
  Mat a = q.polarize();
  REQUIRE(is_nilpotent(a));
  Vec v{0, 0, 0, 1};
  REQUIRE(vec_is_zero(mat_vec(a, v)));
  REQUIRE(q.eval(v) == 0);
  auto vline = Subspace::span_rows(f3, {v}, 4);
  auto sub = subquotient_form(q, sp->perp(vline), vline);
  CHECK(sub.space->dim == 2);
  // evaluation of the descended form agrees with evaluation of lifts
  SubspaceElements elems(Subspace::full(f3, 2));
  for (std::uint64_t i = 0; i < elems.count(); ++i) {
    Vec x = elems.element(i);
    CHECK(sub.form.eval(x) == q.eval(sub.quot.lift(x)));
  }
}
