#include "nilcone/linalg.hpp"

#include <algorithm>

namespace nilcone {

Mat Mat::identity(FieldPtr f, int n) {
  Mat m(std::move(f), n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::from_rows(FieldPtr f, const std::vector<Vec>& rows, int cols) {
  Mat m(std::move(f), static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(static_cast<int>(rows[r].size()) == cols, Errc::Precondition, "row length mismatch");
    for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = rows[r][c];
  }
  return m;
}

Vec Mat::col(int c) const {
  Vec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

void Mat::set_row(int r, const Vec& v) {
  for (int c = 0; c < cols_; ++c) at(r, c) = v[c];
}

bool Mat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](fel x) { return x == 0; });
}

Mat mat_mul(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), Errc::Precondition, "dimension mismatch in mat_mul");
  const Field& f = *a.field();
  Mat c(a.field(), a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      fel aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j)
        c.at(i, j) = f.add(c.at(i, j), f.mul(aik, b.at(k, j)));
    }
  return c;
}

Mat mat_add(const Mat& a, const Mat& b) {
  const Field& f = *a.field();
  Mat c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = f.add(c.data()[i], b.data()[i]);
  return c;
}

Mat mat_sub(const Mat& a, const Mat& b) {
  const Field& f = *a.field();
  Mat c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = f.sub(c.data()[i], b.data()[i]);
  return c;
}

Mat mat_scale(const Mat& a, fel s) {
  const Field& f = *a.field();
  Mat c = a;
  for (auto& x : c.data()) x = f.mul(x, s);
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.field(), a.cols(), a.rows());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) t.at(c, r) = a.at(r, c);
  return t;
}

Vec mat_vec(const Mat& a, const Vec& x) {
  const Field& f = *a.field();
  Vec y(a.rows(), 0);
  for (int r = 0; r < a.rows(); ++r) {
    fel acc = 0;
    for (int c = 0; c < a.cols(); ++c) acc = f.add(acc, f.mul(a.at(r, c), x[c]));
    y[r] = acc;
  }
  return y;
}

Vec vec_add(const FieldPtr& f, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = f->add(a[i], b[i]);
  return c;
}

fel dot(const FieldPtr& f, const Vec& a, const Vec& b) {
  fel acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = f->add(acc, f->mul(a[i], b[i]));
  return acc;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](fel x) { return x == 0; });
}

Mat mat_pow(const Mat& a, std::uint64_t e) {
  Mat r = Mat::identity(a.field(), a.rows());
  Mat base = a;
  while (e) {
    if (e & 1) r = mat_mul(r, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return r;
}

Rref rref_generic(const Mat& m) {
  const Field& f = *m.field();
  Mat w = m;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < w.cols() && r < w.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < w.rows(); ++i)
      if (w.at(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < w.cols(); ++j) std::swap(w.at(sel, j), w.at(r, j));
    fel piv = f.inv(w.at(r, c));
    for (int j = c; j < w.cols(); ++j) w.at(r, j) = f.mul(w.at(r, j), piv);
    for (int i = 0; i < w.rows(); ++i) {
      if (i == r) continue;
      fel t = w.at(i, c);
      if (t == 0) continue;
      for (int j = c; j < w.cols(); ++j)
        w.at(i, j) = f.sub(w.at(i, j), f.mul(t, w.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Mat out(m.field(), r, w.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < w.cols(); ++j) out.at(i, j) = w.at(i, j);
  return {std::move(out), std::move(pivots), r};
}

Rref rref_packed2(const Mat& m) {
  require(m.field()->size() == 2 && m.cols() <= 64, Errc::Precondition,
          "packed path needs F_2 and <= 64 columns");
  std::vector<std::uint64_t> rows(m.rows(), 0);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m.at(r, c)) rows[r] |= (std::uint64_t)1 << c;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < static_cast<int>(rows.size()); ++c) {
    const std::uint64_t bit = (std::uint64_t)1 << c;
    int sel = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i] & bit) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[sel], rows[r]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && (rows[i] & bit)) rows[i] ^= rows[r];
    pivots.push_back(c);
    ++r;
  }
  Mat out(m.field(), r, m.cols());
  for (int i = 0; i < r; ++i)
    for (int c = 0; c < m.cols(); ++c)
      if (rows[i] & ((std::uint64_t)1 << c)) out.at(i, c) = 1;
  return {std::move(out), std::move(pivots), r};
}

Rref rref(const Mat& m) {
  if (m.field()->size() == 2 && m.cols() <= 64) return rref_packed2(m);
  return rref_generic(m);
}

bool is_nilpotent(const Mat& m) {
  require(m.rows() == m.cols(), Errc::Precondition, "is_nilpotent needs a square matrix");
  const int n = m.rows();
  if (n == 0) return true;
  if (m.field()->size() == 2 && n <= 64) {
    std::vector<std::uint64_t> rows(n, 0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (m.at(r, c)) rows[r] |= (std::uint64_t)1 << c;
    std::uint64_t e = 1;
    std::vector<std::uint64_t> cur = rows, nxt(n);
    while (e < static_cast<std::uint64_t>(n)) {
      for (int i = 0; i < n; ++i) {
        std::uint64_t acc = 0, bits = cur[i];
        while (bits) {
          int j = __builtin_ctzll(bits);
          bits &= bits - 1;
          acc ^= cur[j];
        }
        nxt[i] = acc;
      }
      cur.swap(nxt);
      e *= 2;
    }
    for (int i = 0; i < n; ++i)
      if (cur[i]) return false;
    return true;
  }
  Mat cur = m;
  std::uint64_t e = 1;
  while (e < static_cast<std::uint64_t>(n)) {
    cur = mat_mul(cur, cur);
    e *= 2;
    if (cur.is_zero()) return true;
  }
  return cur.is_zero();
}

fel det(const Mat& m) {
  require(m.rows() == m.cols(), Errc::Precondition, "det needs a square matrix");
  const Field& f = *m.field();
  Mat w = m;
  fel d = 1;
  const int n = w.rows();
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int i = c; i < n; ++i)
      if (w.at(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) return 0;
    if (sel != c) {
      for (int j = 0; j < n; ++j) std::swap(w.at(sel, j), w.at(c, j));
      d = f.neg(d);
    }
    d = f.mul(d, w.at(c, c));
    fel piv = f.inv(w.at(c, c));
    for (int i = c + 1; i < n; ++i) {
      fel t = f.mul(w.at(i, c), piv);
      if (t == 0) continue;
      for (int j = c; j < n; ++j) w.at(i, j) = f.sub(w.at(i, j), f.mul(t, w.at(c, j)));
    }
  }
  return d;
}

std::optional<Mat> inverse(const Mat& m) {
  require(m.rows() == m.cols(), Errc::Precondition, "inverse needs a square matrix");
  const Field& f = *m.field();
  const int n = m.rows();
  if (n == 0) return Mat(m.field(), 0, 0);
  Mat w(m.field(), n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) w.at(r, c) = m.at(r, c);
    w.at(r, n + r) = 1;
  }
  Rref rr = rref_generic(w);
  if (rr.rank < n || rr.pivots[n - 1] >= n) return std::nullopt;
  Mat inv(m.field(), n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = rr.mat.at(r, n + c);
  (void)f;
  return inv;
}

std::optional<Vec> solve(const Mat& a, const Vec& b) {
  require(static_cast<int>(b.size()) == a.rows(), Errc::Precondition, "rhs length mismatch");
  Mat aug(a.field(), a.rows(), a.cols() + 1);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  Rref rr = rref(aug);
  for (int i = 0; i < rr.rank; ++i)
    if (rr.pivots[i] == a.cols()) return std::nullopt;  // pivot in the rhs column
  Vec x(a.cols(), 0);
  for (int i = 0; i < rr.rank; ++i) x[rr.pivots[i]] = rr.mat.at(i, a.cols());
  return x;
}

Subspace Subspace::span(const Mat& rows) {
  Rref rr = rref(rows);
  Subspace s;
  s.f_ = rows.field();
  s.ambient_ = rows.cols();
  s.basis_ = std::move(rr.mat);
  return s;
}

Subspace Subspace::span_rows(FieldPtr f, const std::vector<Vec>& rows, int ambient) {
  return span(Mat::from_rows(std::move(f), rows, ambient));
}

Subspace Subspace::zero(FieldPtr f, int ambient) {
  Subspace s;
  s.f_ = std::move(f);
  s.ambient_ = ambient;
  s.basis_ = Mat(s.f_, 0, ambient);
  return s;
}

Subspace Subspace::full(FieldPtr f, int ambient) {
  Subspace s;
  s.f_ = f;
  s.ambient_ = ambient;
  s.basis_ = Mat::identity(std::move(f), ambient);
  return s;
}

bool Subspace::contains(const Vec& v) const {
  const Field& f = *f_;
  Vec w = v;
  int row = 0;
  for (int c = 0; c < ambient_ && row < basis_.rows(); ++c) {
    if (basis_.at(row, c) != 1) continue;  // basis is RREF, pivots are 1
    // c is the pivot column of `row`
    fel t = w[c];
    if (t != 0)
      for (int j = 0; j < ambient_; ++j) w[j] = f.sub(w[j], f.mul(t, basis_.at(row, j)));
    ++row;
  }
  return vec_is_zero(w);
}

bool Subspace::contains(const Subspace& other) const {
  for (int r = 0; r < other.dim(); ++r)
    if (!contains(other.basis_.row(r))) return false;
  return true;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
  if (dim() != o.dim()) return dim() < o.dim();
  return basis_.data() < o.basis_.data();
}

std::optional<Vec> Subspace::coords(const Vec& v) const {
  if (dim() == 0) return vec_is_zero(v) ? std::optional<Vec>(Vec{}) : std::nullopt;
  return express_in_rows(basis_, v);
}

Subspace kernel(const Mat& m) {
  Rref rr = rref(m);
  const Field& f = *m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vec v(m.cols(), 0);
    v[c] = 1;
    for (int i = 0; i < rr.rank; ++i) v[rr.pivots[i]] = f.neg(rr.mat.at(i, c));
    basis.push_back(std::move(v));
  }
  return Subspace::span_rows(m.field(), basis, m.cols());
}

std::pair<int, Subspace> rank_kernel(const Mat& m) {
  Rref rr = rref(m);
  return {rr.rank, kernel(m)};
}

Subspace annihilator(const Subspace& u) {
  if (u.dim() == 0) return Subspace::full(u.field(), u.ambient());
  return kernel(u.basis());
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require(a.ambient() == b.ambient(), Errc::Precondition, "ambient mismatch");
  Mat rows(a.field(), a.dim() + b.dim(), a.ambient());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.ambient(); ++c) rows.at(r, c) = a.basis().at(r, c);
  for (int r = 0; r < b.dim(); ++r)
    for (int c = 0; c < a.ambient(); ++c) rows.at(a.dim() + r, c) = b.basis().at(r, c);
  return Subspace::span(rows);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  return annihilator(subspace_sum(annihilator(a), annihilator(b)));
}

Vec Quotient::project(const Vec& w) const {
  // express w in [sub basis; section] and keep the section coordinates
  std::vector<Vec> rows;
  for (int r = 0; r < sub.dim(); ++r) rows.push_back(sub.basis().row(r));
  for (int r = 0; r < section.rows(); ++r) rows.push_back(section.row(r));
  Mat all = Mat::from_rows(section.field(), rows, whole.ambient());
  auto c = express_in_rows(all, w);
  require(c.has_value(), Errc::Precondition, "vector not in the subspace being quotiented");
  return Vec(c->begin() + sub.dim(), c->end());
}

Vec Quotient::lift(const Vec& qcoords) const {
  const Field& f = *section.field();
  Vec v(whole.ambient(), 0);
  for (int r = 0; r < section.rows(); ++r)
    for (int c = 0; c < whole.ambient(); ++c)
      v[c] = f.add(v[c], f.mul(qcoords[r], section.at(r, c)));
  return v;
}

Quotient quotient_map(const Subspace& w, const Subspace& wp) {
  require(w.ambient() == wp.ambient(), Errc::Precondition, "ambient mismatch");
  require(w.contains(wp), Errc::NotASubspace, "W' is not contained in W");
  // scan W's echelon rows, keeping those independent from W' + kept rows
  Subspace acc = wp;
  std::vector<Vec> reps;
  for (int r = 0; r < w.dim(); ++r) {
    Vec v = w.basis().row(r);
    if (!acc.contains(v)) {
      reps.push_back(v);
      acc = subspace_sum(acc, Subspace::span_rows(w.field(), {v}, w.ambient()));
    }
  }
  Quotient q;
  q.whole = w;
  q.sub = wp;
  q.section = Mat::from_rows(w.field(), reps, w.ambient());
  return q;
}

Subspace kernel_of_linear_map(const FieldPtr& f, int dim_in, int dim_out,
                              const std::function<Vec(int)>& image_of_unit) {
  Mat m(f, dim_out, dim_in);
  for (int c = 0; c < dim_in; ++c) {
    Vec img = image_of_unit(c);
    require(static_cast<int>(img.size()) == dim_out, Errc::Precondition, "image size mismatch");
    for (int r = 0; r < dim_out; ++r) m.at(r, c) = img[r];
  }
  return kernel(m);
}

std::optional<Vec> express_in_rows(const Mat& rows, const Vec& v) {
  // rows^T c = v as a column system
  return solve(transpose(rows), v);
}

std::vector<Subspace> all_subspaces(const FieldPtr& f, int n, int d) {
  std::vector<Subspace> out;
  if (d < 0 || d > n) return out;
  if (d == 0) {
    out.push_back(Subspace::zero(f, n));
    return out;
  }
  // enumerate RREF matrices directly: choose pivot columns, then free entries
  std::vector<int> piv(d);
  const std::uint64_t q = f->size();
  std::function<void(int, int)> rec = [&](int idx, int start) {
    if (idx == d) {
      // free positions: entries (r, c) with c not a pivot, c > piv[r]
      std::vector<std::pair<int, int>> free_pos;
      std::vector<bool> is_piv(n, false);
      for (int p : piv) is_piv[p] = true;
      for (int r = 0; r < d; ++r)
        for (int c = piv[r] + 1; c < n; ++c)
          if (!is_piv[c]) free_pos.emplace_back(r, c);
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < free_pos.size(); ++i) total *= q;
      for (std::uint64_t code = 0; code < total; ++code) {
        Mat b(f, d, n);
        for (int r = 0; r < d; ++r) b.at(r, piv[r]) = 1;
        std::uint64_t c2 = code;
        for (auto [r, c] : free_pos) {
          b.at(r, c) = static_cast<fel>(c2 % q);
          c2 /= q;
        }
        out.push_back(Subspace::span(b));
      }
      return;
    }
    for (int c = start; c < n; ++c) {
      piv[idx] = c;
      rec(idx + 1, c + 1);
    }
  };
  rec(0, 0);
  return out;
}

SubspaceElements::SubspaceElements(Subspace s) : s_(std::move(s)) {
  count_ = 1;
  for (int i = 0; i < s_.dim(); ++i) count_ *= s_.field()->size();
}

Vec SubspaceElements::element(std::uint64_t idx) const {
  const Field& f = *s_.field();
  Vec v(s_.ambient(), 0);
  for (int r = 0; r < s_.dim(); ++r) {
    fel c = static_cast<fel>(idx % f.size());
    idx /= f.size();
    if (c == 0) continue;
    for (int j = 0; j < s_.ambient(); ++j)
      v[j] = f.add(v[j], f.mul(c, s_.basis().at(r, j)));
  }
  return v;
}

}  // namespace nilcone
