#include "nilcone/forms.hpp"

#include <algorithm>

namespace nilcone {

fel SymplecticSpace::pair(const Vec& x, const Vec& y) const {
  const Field& f = *field;
  fel acc = 0;
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    fel row = 0;
    for (int j = 0; j < dim; ++j) row = f.add(row, f.mul(gram.at(i, j), y[j]));
    acc = f.add(acc, f.mul(x[i], row));
  }
  return acc;
}

Subspace SymplecticSpace::perp(const Subspace& u) const {
  if (u.dim() == 0) return Subspace::full(field, dim);
  // (x, u) = 0  <=>  (U G^T) x = 0 for basis rows U
  return kernel(mat_mul(u.basis(), transpose(gram)));
}

SpacePtr standard_symplectic(const FieldPtr& f, int r) {
  const int n = 2 * r;
  Mat g(f, n, n);
  for (int i = 0; i < r; ++i) {
    g.at(i, n - 1 - i) = 1;
    g.at(n - 1 - i, i) = f->neg(1);
  }
  return make_symplectic(f, g);
}

SpacePtr make_symplectic(const FieldPtr& f, const Mat& gram) {
  auto s = std::make_shared<SymplecticSpace>();
  s->field = f;
  s->dim = gram.rows();
  require(gram.rows() == gram.cols(), Errc::Precondition, "Gram matrix must be square");
  for (int i = 0; i < s->dim; ++i) {
    require(gram.at(i, i) == 0, Errc::Precondition, "Gram must be alternating");
    for (int j = 0; j < s->dim; ++j)
      require(gram.at(i, j) == f->neg(gram.at(j, i)), Errc::Precondition,
              "Gram must be skew");
  }
  s->gram = gram;
  auto inv = inverse(gram);
  require(inv.has_value(), Errc::Precondition, "Gram must be nondegenerate");
  s->gram_inv = *inv;
  s->polarizer = *inverse(transpose(gram));
  return s;
}

QuadForm::QuadForm(SpacePtr space, std::vector<fel> coeffs)
    : sp_(std::move(space)), c_(std::move(coeffs)) {
  require(static_cast<int>(c_.size()) == coeff_count(sp_->dim), Errc::Precondition,
          "coefficient count mismatch");
}

QuadForm QuadForm::zero(SpacePtr space) {
  int n = space->dim;
  return QuadForm(std::move(space), std::vector<fel>(coeff_count(n), 0));
}

QuadForm QuadForm::from_index(SpacePtr space, std::uint64_t idx) {
  const std::uint64_t q = space->field->size();
  int n = space->dim;
  std::vector<fel> c(coeff_count(n));
  for (auto& x : c) {
    x = static_cast<fel>(idx % q);
    idx /= q;
  }
  return QuadForm(std::move(space), std::move(c));
}

fel QuadForm::eval(const Vec& x) const {
  const Field& f = *sp_->field;
  const int n = dim();
  fel acc = 0;
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) {
      idx += n - i;
      continue;
    }
    fel partial = 0;
    for (int j = i; j < n; ++j, ++idx) partial = f.add(partial, f.mul(c_[idx], x[j]));
    acc = f.add(acc, f.mul(x[i], partial));
  }
  return acc;
}

fel QuadForm::bilinear(const Vec& x, const Vec& y) const {
  const Field& f = *sp_->field;
  fel s = eval(vec_add(sp_->field, x, y));
  return f.sub(f.sub(s, eval(x)), eval(y));
}

bool QuadForm::is_zero() const { return vec_is_zero(c_); }

Mat QuadForm::polarize() const {
  const Field& f = *sp_->field;
  const int n = dim();
  // M_Q: the Gram of the polar form; diagonal carries 2 q_ii
  Mat m(sp_->field, n, n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = f.add(coeff(i, i), coeff(i, i));
    for (int j = i + 1; j < n; ++j) {
      m.at(i, j) = coeff(i, j);
      m.at(j, i) = coeff(i, j);
    }
  }
  return mat_mul(sp_->polarizer, m);
}

QuadForm QuadForm::compose(const Mat& mtx) const {
  const int n = dim();
  std::vector<fel> out(coeff_count(n));
  std::vector<Vec> cols(n);
  for (int i = 0; i < n; ++i) cols[i] = mtx.col(i);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++idx)
      out[idx] = (i == j) ? eval(cols[i]) : bilinear(cols[i], cols[j]);
  return QuadForm(sp_, std::move(out));
}

QuadForm QuadForm::add(const QuadForm& other) const {
  require(sp_ == other.sp_ || (sp_->dim == other.sp_->dim && sp_->gram == other.sp_->gram),
          Errc::Precondition, "forms live on different spaces");
  std::vector<fel> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = sp_->field->add(c_[i], other.c_[i]);
  return QuadForm(sp_, std::move(out));
}

std::vector<fel> QuadForm::restrict_coeffs(const Mat& basis_rows) const {
  const int d = basis_rows.rows();
  std::vector<fel> out(coeff_count(d));
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++idx)
      out[idx] = (i == j) ? eval(basis_rows.row(i))
                          : bilinear(basis_rows.row(i), basis_rows.row(j));
  return out;
}

bool QuadForm::restricted_zero(const Subspace& u) const {
  return vec_is_zero(restrict_coeffs(u.basis()));
}

QuadForm sigma_to_form(const LieAlgebra& sp_alg, const SpacePtr& space,
                       const DualFunctional& xi) {
  require(sp_alg.kind == Kind::C && sp_alg.vdim == space->dim, Errc::Precondition,
          "sigma needs the symplectic algebra of the space");
  const int n = space->dim;
  const FieldPtr& f = space->field;
  // tr(T_b X) = xi_b, unknowns X row-major
  Mat sys(f, sp_alg.dim(), n * n);
  for (int b = 0; b < sp_alg.dim(); ++b)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        sys.at(b, k * n + i) = sp_alg.basis[b].at(i, k);
  auto sol = solve(sys, xi.coeffs);
  require(sol.has_value(), Errc::InternalCheck, "trace system is inconsistent");
  Mat x(f, n, n);
  for (int i = 0; i < n * n; ++i) x.data()[i] = (*sol)[i];
  std::vector<fel> coeffs(QuadForm::coeff_count(n));
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    Vec ei(n, 0);
    ei[i] = 1;
    Vec xei = mat_vec(x, ei);
    for (int j = i; j < n; ++j, ++idx) {
      Vec ej(n, 0);
      ej[j] = 1;
      if (i == j) {
        coeffs[idx] = space->pair(xei, ei);
      } else {
        Vec xej = mat_vec(x, ej);
        coeffs[idx] = f->add(space->pair(xei, ej), space->pair(xej, ei));
      }
    }
  }
  return QuadForm(space, std::move(coeffs));
}

DualFunctional sigma_from_form(const LieAlgebra& sp_alg, const QuadForm& q) {
  require(sp_alg.kind == Kind::C && sp_alg.vdim == q.dim(), Errc::Precondition,
          "sigma needs the symplectic algebra of the space");
  const int n = q.dim();
  const FieldPtr& f = q.space()->field;
  Mat c(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) c.at(i, j) = q.coeff(i, j);
  Mat x = transpose(mat_mul(c, q.space()->gram_inv));
  DualFunctional xi;
  xi.alg = &sp_alg;
  xi.coeffs.assign(sp_alg.dim(), 0);
  for (int b = 0; b < sp_alg.dim(); ++b) {
    fel acc = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        acc = f->add(acc, f->mul(sp_alg.basis[b].at(i, k), x.at(k, i)));
    xi.coeffs[b] = acc;
  }
  return xi;
}

bool nilpotent_dual_test(const LieAlgebra& sp_alg, const SpacePtr& space,
                         const DualFunctional& xi) {
  return is_nilpotent(sigma_to_form(sp_alg, space, xi).polarize());
}

SubquotientForm subquotient_form(const QuadForm& q, const Subspace& w, const Subspace& wp) {
  const SpacePtr& amb = q.space();
  const FieldPtr& f = amb->field;
  Quotient quot = quotient_map(w, wp);  // NotASubspace if wp not in w
  // the pairing and the form must descend
  for (int i = 0; i < w.dim(); ++i)
    for (int j = 0; j < wp.dim(); ++j) {
      require(amb->pair(w.basis().row(i), wp.basis().row(j)) == 0, Errc::NotCompatible,
              "pairing does not descend to the subquotient");
      require(q.bilinear(w.basis().row(i), wp.basis().row(j)) == 0, Errc::NotCompatible,
              "polar form does not descend to the subquotient");
    }
  require(q.restricted_zero(wp), Errc::NotCompatible, "form does not vanish on the kernel");

  const int m = quot.dim();
  Mat gram(f, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      gram.at(i, j) = amb->pair(quot.section.row(i), quot.section.row(j));
  SpacePtr space;
  try {
    space = make_symplectic(f, gram);
  } catch (const Error&) {
    fail(Errc::InternalCheck, "descended pairing is degenerate");
  }
  std::vector<fel> coeffs = q.restrict_coeffs(quot.section);
  return {space, QuadForm(space, std::move(coeffs)), std::move(quot)};
}

namespace {

struct NeedExtension {};

// one recursion level over the current field; throws NeedExtension when no
// rational isotropic kernel vector exists
Mat good_basis_build(const SpacePtr& space, const QuadForm& q) {
  const FieldPtr& f = space->field;
  const int n = space->dim;
  const int r = n / 2;
  if (r == 0) return Mat(f, 0, n);
  Mat a = q.polarize();
  Subspace ker = kernel(a);
  require(ker.dim() >= 1, Errc::InternalCheck, "nilpotent map with trivial kernel");
  SubspaceElements elems(ker);
  Vec v;
  bool found = false;
  for (std::uint64_t i = 1; i < elems.count(); ++i) {
    Vec cand = elems.element(i);
    if (q.eval(cand) == 0) {
      v = cand;
      found = true;
      break;
    }
  }
  if (!found) throw NeedExtension{};

  Subspace vline = Subspace::span_rows(f, {v}, n);
  Subspace vperp = space->perp(vline);
  auto sub = subquotient_form(q, vperp, vline);
  Mat inner = good_basis_build(sub.space, sub.form);

  Mat rows(f, 2 * r, n);
  for (int t = 0; t < inner.rows(); ++t) rows.set_row(1 + t, sub.quot.lift(inner.row(t)));
  rows.set_row(2 * r - 1, v);
  // e_{-2r+1}: pairs to -1 with v (so (v, e_{-2r+1}) = 1) and to 0 with the lifts
  Mat sys(f, 2 * r - 1, n);
  Vec rhs(2 * r - 1, 0);
  for (int t = 0; t < 2 * r - 2; ++t) {
    Vec u = rows.row(1 + t);
    for (int c = 0; c < n; ++c) {
      fel acc = 0;
      for (int j = 0; j < n; ++j) acc = f->add(acc, f->mul(space->gram.at(c, j), u[j]));
      sys.at(t, c) = acc;
    }
  }
  for (int c = 0; c < n; ++c) {
    fel acc = 0;
    for (int j = 0; j < n; ++j) acc = f->add(acc, f->mul(space->gram.at(c, j), v[j]));
    sys.at(2 * r - 2, c) = acc;
  }
  rhs[2 * r - 2] = f->neg(1);
  auto ebot = solve(sys, rhs);
  require(ebot.has_value(), Errc::InternalCheck, "no pairing-dual vector");
  rows.set_row(0, *ebot);

  // trace obstruction: the expansion of A e_{-2r+1} must have no e_{-2r+1} term
  Vec img = mat_vec(a, *ebot);
  auto coords = express_in_rows(rows, img);
  require(coords.has_value() && (*coords)[0] == 0, Errc::InternalCheck,
          "trace coefficient obstruction in the triangularizing basis");
  return rows;
}

}  // namespace

GoodBasis good_basis(const QuadForm& q, std::uint32_t extension_cap) {
  require(is_nilpotent(q.polarize()), Errc::NotNilpotent,
          "good_basis needs a nilpotent polarization");
  const FieldPtr base = q.space()->field;
  GoodBasis gb;
  gb.field = base;
  gb.embed.resize(base->size());
  for (fel i = 0; i < base->size(); ++i) gb.embed[i] = i;
  gb.ext_degree = 1;
  gb.r = q.dim() / 2;

  SpacePtr space = q.space();
  QuadForm cur = q;
  for (;;) {
    try {
      gb.vectors = good_basis_build(space, cur);
      return gb;
    } catch (const NeedExtension&) {
      require(gb.ext_degree * 2 <= extension_cap, Errc::ExtensionCapExceeded,
              "no isotropic vector within the extension cap");
      FieldExtension ext = extend(space->field, 2);
      gb.ext_degree *= 2;
      gb.embed = compose_embeddings(gb.embed, ext.embed);
      // lift the space and the form
      Mat gram(ext.big, space->dim, space->dim);
      for (int i = 0; i < space->dim; ++i)
        for (int j = 0; j < space->dim; ++j) gram.at(i, j) = ext.embed[space->gram.at(i, j)];
      space = make_symplectic(ext.big, gram);
      std::vector<fel> coeffs(cur.coeffs().size());
      for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = ext.embed[cur.coeffs()[i]];
      cur = QuadForm(space, std::move(coeffs));
      gb.field = ext.big;
    }
  }
}

bool good_basis_check(const QuadForm& q, const GoodBasis& gb, std::string* why) {
  auto explain = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const FieldPtr& f = gb.field;
  const int n = 2 * gb.r;
  if (gb.vectors.rows() != n) return explain("wrong number of vectors");
  // lift the ambient data
  Mat gram(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram.at(i, j) = gb.embed[q.space()->gram.at(i, j)];
  SpacePtr space = n > 0 ? make_symplectic(f, gram) : nullptr;
  std::vector<fel> coeffs(q.coeffs().size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = gb.embed[q.coeffs()[i]];
  if (n == 0) return true;
  QuadForm lifted(space, coeffs);

  // goodness of the pairing
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      int i = gb.index_of_row(s), j = gb.index_of_row(t);
      fel got = space->pair(gb.vectors.row(s), gb.vectors.row(t));
      fel want = 0;
      if (i + j == 0) want = i > 0 ? 1 : f->neg(1);
      if (got != want) return explain("pairing is not good");
    }
  // A strictly raises the index
  Mat a = lifted.polarize();
  for (int s = 0; s < n; ++s) {
    auto coords = express_in_rows(gb.vectors, mat_vec(a, gb.vectors.row(s)));
    if (!coords.has_value()) return explain("A image leaves the basis span");
    for (int t = 0; t <= s; ++t)
      if ((*coords)[t] != 0) return explain("A is not strictly index-raising");
  }
  // Q vanishes on nonnegative indices
  for (int s = 0; s < n; ++s)
    if (gb.index_of_row(s) >= 0 && lifted.eval(gb.vectors.row(s)) != 0)
      return explain("Q nonzero on a nonnegative index vector");
  return true;
}

std::uint64_t fiber_count(const SpacePtr& space, const Mat& a) {
  require(space->field->p() == 2, Errc::Precondition, "fiber counting needs characteristic 2");
  const FieldPtr& f = space->field;
  const int n = space->dim;
  // (A x, x) = 0 as a form: diagonal and symmetrized cross coefficients vanish
  for (int i = 0; i < n; ++i) {
    Vec ei(n, 0);
    ei[i] = 1;
    Vec ai = mat_vec(a, ei);
    require(space->pair(ai, ei) == 0, Errc::NotAlternating, "(Ax, x) != 0");
    for (int j = i + 1; j < n; ++j) {
      Vec ej(n, 0);
      ej[j] = 1;
      Vec aj = mat_vec(a, ej);
      require(f->add(space->pair(ai, ej), space->pair(aj, ei)) == 0, Errc::NotAlternating,
              "(Ax, x) != 0");
    }
  }
  const int d = QuadForm::coeff_count(n);
  Mat sys(f, n * n, d);
  for (int c = 0; c < d; ++c) {
    std::vector<fel> unit(d, 0);
    unit[c] = 1;
    Mat pc = QuadForm(space, unit).polarize();
    for (int i = 0; i < n * n; ++i) sys.at(i, c) = pc.data()[i];
  }
  Vec rhs(a.data().begin(), a.data().end());
  auto sol = solve(sys, rhs);
  if (!sol.has_value()) return 0;
  int nullity = d - rref(sys).rank;
  std::uint64_t count = 1;
  for (int i = 0; i < nullity; ++i) count *= f->size();
  return count;
}

IsotropicSearch find_isotropic(const FieldPtr& f, int n, const std::vector<fel>& coeffs,
                               std::uint32_t extension_cap) {
  IsotropicSearch out;
  out.field = f;
  out.embed.resize(f->size());
  for (fel i = 0; i < f->size(); ++i) out.embed[i] = i;
  out.ext_degree = 1;
  std::vector<fel> cur = coeffs;
  FieldPtr field = f;
  for (;;) {
    const std::uint64_t q = field->size();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    for (std::uint64_t code = 1; code < total; ++code) {
      Vec x(n);
      std::uint64_t cc = code;
      for (auto& xi : x) {
        xi = static_cast<fel>(cc % q);
        cc /= q;
      }
      fel acc = 0;
      int idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx)
          acc = field->add(acc, field->mul(cur[idx], field->mul(x[i], x[j])));
      if (acc == 0) {
        out.field = field;
        out.vector = x;
        return out;
      }
    }
    require(out.ext_degree * 2 <= extension_cap, Errc::ExtensionCapExceeded,
            "no isotropic vector within the extension cap");
    FieldExtension ext = extend(field, 2);
    out.ext_degree *= 2;
    out.embed = compose_embeddings(out.embed, ext.embed);
    for (auto& c : cur) c = ext.embed[c];
    field = ext.big;
  }
}

}  // namespace nilcone
