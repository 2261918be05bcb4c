#include "nilcone/classical.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nilcone {

Kind kind_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Kind::A;
  if (s == "C" || s == "c") return Kind::C;
  if (s == "D" || s == "d") return Kind::D;
  fail(Errc::Precondition, "unknown kind '" + s + "' (expected A, C or D)");
}

namespace {

int tri_index(int i, int j, int n) {  // upper-tri row-major, i <= j
  return i * (2 * n - i + 1) / 2 + (j - i);
}

fel eval_quad(const std::vector<fel>& coeffs, const FieldPtr& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  fel acc = 0;
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++idx)
      acc = f->add(acc, f->mul(coeffs[idx], f->mul(x[i], x[j])));
  return acc;
}

Mat split_symplectic_gram(const FieldPtr& f, int n) {
  Mat g(f, n, n);
  const int r = n / 2;
  for (int i = 0; i < r; ++i) {
    g.at(i, n - 1 - i) = 1;
    g.at(n - 1 - i, i) = f->neg(1);
  }
  return g;
}

Mat split_symmetric_gram(const FieldPtr& f, int n) {
  Mat g(f, n, n);
  for (int i = 0; i < n; ++i) g.at(i, n - 1 - i) = 1;
  return g;
}

std::vector<fel> split_quadratic(const FieldPtr& f, int n) {
  std::vector<fel> q(static_cast<std::size_t>(n) * (n + 1) / 2, 0);
  for (int i = 0; i < n / 2; ++i) q[tri_index(i, n - 1 - i, n)] = 1;
  (void)f;
  return q;
}

}  // namespace

Vec LieAlgebra::coords(const Mat& t) const {
  Vec flat(t.data().begin(), t.data().end());
  auto c = express_in_rows(basis_rows, flat);
  require(c.has_value(), Errc::Precondition, "matrix is not in the algebra");
  return *c;
}

Mat LieAlgebra::from_coords(const Vec& c) const {
  Mat t(field, vdim, vdim);
  for (int b = 0; b < dim(); ++b) {
    if (c[b] == 0) continue;
    for (std::size_t i = 0; i < t.data().size(); ++i)
      t.data()[i] = field->add(t.data()[i], field->mul(c[b], basis[b].data()[i]));
  }
  return t;
}

bool LieAlgebra::contains(const Mat& t) const {
  Vec flat(t.data().begin(), t.data().end());
  return express_in_rows(basis_rows, flat).has_value();
}

LieAlgebra build_algebra(Kind kind, int vdim, FieldPtr field) {
  require(vdim >= 0, Errc::Precondition, "vdim must be nonnegative");
  if (kind != Kind::A)
    require(vdim % 2 == 0, Errc::OddDimension, "kinds C and D need even dimension");
  LieAlgebra g;
  g.kind = kind;
  g.vdim = vdim;
  g.field = field;
  const int n = vdim;

  Subspace sol;
  if (kind == Kind::A) {
    sol = Subspace::full(field, n * n);
  } else {
    g.gram = (kind == Kind::C) ? split_symplectic_gram(field, n) : split_symmetric_gram(field, n);
    if (kind == Kind::D) g.qamb = split_quadratic(field, n);
    // entries of T, row-major; conditions per basis pair
    const Mat& gram = g.gram;
    auto image = [&](int unit) {
      // unit = r*n + c: T = E_{rc}
      int r = unit / n, c = unit % n;
      Vec out;
      if (kind == Kind::C) {
        // (T e_i, e_j) + (e_i, T e_j) = 0 for all i, j
        out.assign(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            fel v = 0;
            if (c == i) v = field->add(v, gram.at(r, j));   // (T e_i, e_j)
            if (c == j) v = field->add(v, gram.at(i, r));   // (e_i, T e_j)
            out[static_cast<std::size_t>(i) * n + j] = v;
          }
      } else {
        // (T e_i, e_i) = 0 and (T e_i, e_j) + (T e_j, e_i) = 0 for i < j
        out.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0);
        int idx = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j, ++idx) {
            fel v = 0;
            if (c == i) v = field->add(v, gram.at(r, j));
            if (c == j && i != j) v = field->add(v, gram.at(i, r));
            out[idx] = v;
          }
      }
      return out;
    };
    int out_dim = (kind == Kind::C) ? n * n : n * (n + 1) / 2;
    sol = kernel_of_linear_map(field, n * n, out_dim, image);
  }

  for (int b = 0; b < sol.dim(); ++b) {
    Mat t(field, n, n);
    for (int i = 0; i < n * n; ++i) t.data()[i] = sol.basis().at(b, i);
    g.basis.push_back(std::move(t));
  }
  g.basis_rows = sol.basis();

  int expect = kind == Kind::A   ? n * n
               : kind == Kind::C ? (n / 2) * (n + 1)
                                 : (n / 2) * (n - 1);
  require(g.dim() == expect, Errc::InternalCheck, "algebra dimension mismatch");
  return g;
}

RootCount num_roots(Kind kind, int rank) {
  require(rank >= 1, Errc::Precondition, "rank must be >= 1");
  long long r = rank;
  switch (kind) {
    case Kind::A: return {kind, rank, r * (r - 1)};       // GL_r has r(r-1) roots
    case Kind::C: return {kind, rank, 2 * r * r};
    case Kind::D: return {kind, rank, 2 * r * (r - 1)};
  }
  fail(Errc::Precondition, "unknown kind");
}

long long enumerate_roots(Kind kind, int rank) {
  // standard realizations: A_{n-1} in gl_n: eps_i - eps_j (i != j);
  // C_r: {±eps_i ± eps_j (i<j)} ∪ {±2 eps_i}; D_r: {±eps_i ± eps_j (i<j)}
  long long count = 0;
  if (kind == Kind::A) {
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (i != j) ++count;
    return count;
  }
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) count += 4;
  if (kind == Kind::C) count += 2 * rank;
  return count;
}

DualFunctional transport_iso(const LieAlgebra& g, const Mat& t) {
  require(g.kind != Kind::C, Errc::WrongKind, "transport_iso is defined for kinds A and D");
  require(g.contains(t), Errc::Precondition, "matrix is not in the algebra");
  const FieldPtr& f = g.field;
  const int n = g.vdim;
  DualFunctional xi;
  xi.alg = &g;
  xi.coeffs.assign(g.dim(), 0);
  if (g.kind == Kind::A) {
    // X -> [S -> tr(S X)]
    for (int b = 0; b < g.dim(); ++b) {
      fel acc = 0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          acc = f->add(acc, f->mul(g.basis[b].at(i, k), t.at(k, i)));
      xi.coeffs[b] = acc;
    }
    return xi;
  }
  // kind D: T -> omega_T(x,y) = (Tx, y), pushed to V* through the Gram, then
  // paired with omega_S coefficient-wise over i < j.
  Mat ginv = *inverse(g.gram);
  // eta_{ij} = (T u_i, u_j) with u_i = row i of G^{-1}
  Mat eta(f, n, n);
  for (int i = 0; i < n; ++i) {
    Vec ui = ginv.row(i);
    Vec tui = mat_vec(t, ui);
    for (int j = 0; j < n; ++j) {
      Vec uj = ginv.row(j);
      // (T u_i, u_j) = (T u_i)^T G u_j
      fel acc = 0;
      for (int a = 0; a < n; ++a)
        for (int b2 = 0; b2 < n; ++b2)
          acc = f->add(acc, f->mul(tui[a], f->mul(g.gram.at(a, b2), uj[b2])));
      eta.at(i, j) = acc;
    }
  }
  for (int b = 0; b < g.dim(); ++b) {
    const Mat& s = g.basis[b];
    // (S e_i, e_j) = (S^T G)_{ij}
    fel acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        fel sij = 0;
        for (int a = 0; a < n; ++a) sij = f->add(sij, f->mul(s.at(a, i), g.gram.at(a, j)));
        acc = f->add(acc, f->mul(eta.at(i, j), sij));
      }
    xi.coeffs[b] = acc;
  }
  return xi;
}

Mat adjoint_act(const Mat& g, const Mat& t) {
  auto gi = inverse(g);
  require(gi.has_value(), Errc::Precondition, "group element must be invertible");
  return mat_mul(mat_mul(g, t), *gi);
}

DualFunctional coadjoint_act(const LieAlgebra& alg, const Mat& g, const DualFunctional& xi) {
  auto gi = inverse(g);
  require(gi.has_value(), Errc::Precondition, "group element must be invertible");
  DualFunctional out;
  out.alg = &alg;
  out.coeffs.assign(alg.dim(), 0);
  for (int b = 0; b < alg.dim(); ++b) {
    Mat conj = mat_mul(mat_mul(*gi, alg.basis[b]), g);
    out.coeffs[b] = xi.eval_coords(alg.coords(conj));
  }
  return out;
}

Subspace AlgebraGrading::v_ge(int a) const {
  std::vector<Vec> rows;
  const int n = alg->vdim;
  for (int i = 0; i < n; ++i)
    if (vdeg[i] >= a) {
      Vec v(n, 0);
      v[i] = 1;
      rows.push_back(v);
    }
  return Subspace::span_rows(alg->field, rows, n);
}

Subspace AlgebraGrading::v_at(int a) const {
  std::vector<Vec> rows;
  const int n = alg->vdim;
  for (int i = 0; i < n; ++i)
    if (vdeg[i] == a) {
      Vec v(n, 0);
      v[i] = 1;
      rows.push_back(v);
    }
  return Subspace::span_rows(alg->field, rows, n);
}

bool AlgebraGrading::in_g_ge0(const Mat& m) const {
  int lo = *std::min_element(vdeg.begin(), vdeg.end());
  int hi = *std::max_element(vdeg.begin(), vdeg.end());
  for (int a = lo; a <= hi; ++a) {
    Subspace vge = v_ge(a);
    for (int r = 0; r < vge.dim(); ++r)
      if (!vge.contains(mat_vec(m, vge.basis().row(r)))) return false;
  }
  return true;
}

AlgebraGrading grade_algebra(const LieAlgebra& alg, const std::vector<int>& vdeg) {
  require(static_cast<int>(vdeg.size()) == alg.vdim, Errc::Precondition,
          "degree vector length mismatch");
  const FieldPtr& f = alg.field;
  const int n = alg.vdim;
  // form compatibility: graded pieces of noncomplementary degree must not pair
  if (alg.kind != Kind::A) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (vdeg[i] + vdeg[j] != 0 && alg.gram.at(i, j) != 0)
          fail(Errc::NotSGood, "grading pairs nonzero degrees");
    std::map<int, int> dims;
    for (int d : vdeg) dims[d]++;
    for (auto [d, c] : dims) {
      if (dims.count(-d) == 0 || dims[-d] != c) fail(Errc::NotSGood, "dims not symmetric");
    }
    if (alg.kind == Kind::C) {
      // s-good: f_i >= f_{i+2} for i >= 0, even dims in even degrees
      auto dim_of = [&](int d) { return dims.count(d) ? dims[d] : 0; };
      int maxd = 0;
      for (int d : vdeg) maxd = std::max(maxd, std::abs(d));
      for (int i = 0; i <= maxd; ++i) {
        if (dim_of(i) < dim_of(i + 2)) fail(Errc::NotSGood, "dimension chain not monotone");
        if (i % 2 == 0 && dim_of(i) % 2 != 0) fail(Errc::NotSGood, "odd dim in even degree");
      }
    }
    if (alg.kind == Kind::D) {
      // ambient quadratic form must vanish on nonzero-degree pieces
      for (int i = 0; i < n; ++i)
        if (vdeg[i] != 0 && alg.qamb[tri_index(i, i, n)] != 0)
          fail(Errc::NotSGood, "quadratic form nonzero on graded vector");
      // cross terms within V_i, i != 0 are covered by the Gram condition
    }
  }

  AlgebraGrading out;
  out.alg = &alg;
  out.vdeg = vdeg;

  int lo = *std::min_element(vdeg.begin(), vdeg.end());
  int hi = *std::max_element(vdeg.begin(), vdeg.end());
  int total = 0;
  for (int i = lo - hi; i <= hi - lo; ++i) {
    // g_i = {T in g : T_{rc} = 0 unless deg(r) = deg(c) + i}
    auto image = [&](int unit) {
      Vec bad;
      const Mat& t = alg.basis[unit];
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (vdeg[r] - vdeg[c] != i) bad.push_back(t.at(r, c));
      return bad;
    };
    int bad_count = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (vdeg[r] - vdeg[c] != i) ++bad_count;
    Subspace gi = kernel_of_linear_map(f, alg.dim(), bad_count, image);
    if (gi.dim() > 0 || i == 0) out.g_parts[i] = gi;
    total += gi.dim();
  }
  require(total == alg.dim(), Errc::InternalCheck, "graded pieces do not sum to g");

  for (auto& [i, gi] : out.g_parts) {
    // g*_j = Ann(sum of g_i, i != -j)
    int j = -i;
    Subspace others = Subspace::zero(f, alg.dim());
    for (auto& [i2, gi2] : out.g_parts)
      if (i2 != -j) others = subspace_sum(others, gi2);
    out.gstar_parts[j] = annihilator(others);
  }
  return out;
}

std::uint64_t group_order(Kind kind, int vdim, std::uint64_t q) {
  // q^{n(n-1)/2} prod (q^i - 1) style formulas for the split groups
  auto qpow = [&](int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
  };
  if (kind == Kind::A) {
    std::uint64_t r = 1;
    for (int i = 0; i < vdim; ++i) r *= (qpow(vdim) - qpow(i));
    return r;
  }
  int rank = vdim / 2;
  if (kind == Kind::C) {
    std::uint64_t r = qpow(rank * rank);
    for (int i = 1; i <= rank; ++i) r *= (qpow(2 * i) - 1);
    return r;
  }
  // split SO_{2r} = O/2 in any characteristic (det or Dickson kernel)
  std::uint64_t r = qpow(rank * (rank - 1)) * (qpow(rank) - 1);
  for (int i = 1; i < rank; ++i) r *= (qpow(2 * i) - 1);
  return r;
}

int dickson_invariant(const LieAlgebra& so, const Mat& g) {
  require(so.field->p() == 2, Errc::Precondition, "Dickson invariant needs characteristic 2");
  Mat gp1 = mat_sub(g, Mat::identity(so.field, so.vdim));
  return rref(gp1).rank % 2;
}

std::vector<Mat> enumerate_group(Kind kind, int vdim, const FieldPtr& field,
                                 std::uint64_t max_order) {
  const int n = vdim;
  const std::uint64_t q = field->size();
  // candidate space gate
  double bits = n * n * std::log2(static_cast<double>(q));
  require(bits <= 26.0, Errc::SizeLimitExceeded, "matrix space too large to filter");
  std::uint64_t total = 1;
  for (int i = 0; i < n * n; ++i) total *= q;

  LieAlgebra model;
  if (kind != Kind::C && kind != Kind::D) {
    // kind A needs no form data
  } else {
    model = build_algebra(kind, vdim, field);
  }
  std::vector<Mat> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    Mat m(field, n, n);
    std::uint64_t c = code;
    for (int i = 0; i < n * n; ++i) {
      m.data()[i] = static_cast<fel>(c % q);
      c /= q;
    }
    bool keep = false;
    if (kind == Kind::A) {
      keep = rref(m).rank == n;
    } else if (kind == Kind::C) {
      keep = mat_mul(mat_mul(transpose(m), model.gram), m) == model.gram;
    } else {
      // O(Q): preserve the bilinear form and the quadratic values on a basis
      if (mat_mul(mat_mul(transpose(m), model.gram), m) == model.gram) {
        keep = true;
        for (int i = 0; i < n && keep; ++i) {
          Vec ei(n, 0);
          ei[i] = 1;
          keep = eval_quad(model.qamb, field, mat_vec(m, ei)) ==
                 eval_quad(model.qamb, field, ei);
        }
        if (keep) {
          if (field->p() == 2)
            keep = dickson_invariant(model, m) == 0;
          else
            keep = det(m) == 1;
        }
      }
    }
    if (keep) {
      out.push_back(std::move(m));
      require(out.size() <= max_order, Errc::SizeLimitExceeded, "group too large");
    }
  }
  return out;
}

Subspace standard_borel(const LieAlgebra& alg) {
  const int n = alg.vdim;
  auto image = [&](int unit) {
    Vec below;
    const Mat& t = alg.basis[unit];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < r; ++c) below.push_back(t.at(r, c));
    return below;
  };
  return kernel_of_linear_map(alg.field, alg.dim(), n * (n - 1) / 2, image);
}

std::vector<Subspace> rational_borels(const LieAlgebra& alg, const std::vector<Mat>& group) {
  Subspace b = standard_borel(alg);
  std::set<Subspace> seen;
  std::vector<Mat> bmats;
  for (int r = 0; r < b.dim(); ++r) bmats.push_back(alg.from_coords(b.basis().row(r)));
  for (const Mat& g : group) {
    auto gi = inverse(g);
    std::vector<Vec> rows;
    for (const Mat& t : bmats) rows.push_back(alg.coords(mat_mul(mat_mul(g, t), *gi)));
    seen.insert(Subspace::span_rows(alg.field, rows, alg.dim()));
  }
  return {seen.begin(), seen.end()};
}

bool vanishes_on(const DualFunctional& xi, const Subspace& subalgebra) {
  for (int r = 0; r < subalgebra.dim(); ++r)
    if (xi.eval_coords(subalgebra.basis().row(r)) != 0) return false;
  return true;
}

bool borel_nilpotent(const DualFunctional& xi, const std::vector<Subspace>& borels) {
  for (const auto& b : borels)
    if (vanishes_on(xi, b)) return true;
  return false;
}

}  // namespace nilcone
