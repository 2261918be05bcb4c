#include "nilcone/pieces.hpp"

#include <algorithm>
#include <set>

namespace nilcone {

// ---- piece labels ----------------------------------------------------------

int PieceLabel::total_dim() const {
  int total = at(0);
  for (int a = 1; a <= max_degree(); ++a) total += 2 * at(a);
  return total;
}

bool PieceLabel::admissible(int dim_v) const {
  if (total_dim() != dim_v) return false;
  for (int a = 0; a <= max_degree() + 2; ++a) {
    if (a % 2 == 0 && at(a) % 2 != 0) return false;
    if (at(a) < at(a + 2)) return false;
  }
  for (int a : f)
    if (a < 0) return false;
  return true;
}

std::string PieceLabel::str() const {
  std::string out;
  for (int a = 0; a <= max_degree(); ++a) {
    if (at(a) == 0) continue;
    if (!out.empty()) out += " ";  // space keeps the CSV schema intact
    out += "f" + std::to_string(a) + "=" + std::to_string(at(a));
  }
  return out.empty() ? "f0=0" : out;
}

bool PieceLabel::operator<(const PieceLabel& o) const {
  int top = std::max(max_degree(), o.max_degree());
  for (int a = 0; a <= top; ++a) {
    if (at(a) != o.at(a)) return at(a) < o.at(a);
  }
  return false;
}

std::vector<PieceLabel> admissible_sequences(int dim_v) {
  require(dim_v >= 0 && dim_v % 2 == 0, Errc::Precondition, "dimension must be even >= 0");
  std::vector<PieceLabel> out;
  // even chain f0 >= f2 >= ... (even entries), odd chain f1 >= f3 >= ...
  std::vector<int> evens, odds;
  std::function<void(int)> pick_odds = [&](int budget) {
    if (budget == 0) {
      int top = 2 * static_cast<int>(std::max(evens.size(), odds.size()));
      std::vector<int> f(top + 1, 0);
      for (std::size_t i = 0; i < evens.size(); ++i) f[2 * i] = evens[i];
      for (std::size_t i = 0; i < odds.size(); ++i) f[2 * i + 1] = odds[i];
      while (!f.empty() && f.back() == 0) f.pop_back();
      PieceLabel label{f};
      if (label.admissible(dim_v)) out.push_back(label);
      return;
    }
    int cap = odds.empty() ? budget : std::min(budget, odds.back());
    // each odd-degree entry d contributes 2d (degrees a and -a)
    for (int d = 1; 2 * d <= budget && d <= cap; ++d) {
      odds.push_back(d);
      pick_odds(budget - 2 * d);
      odds.pop_back();
    }
  };
  std::function<void(int)> pick_evens = [&](int budget) {
    // odds consume the remaining budget
    pick_odds(budget);
    int cap = evens.empty() ? budget : std::min(budget, evens.back());
    for (int d = 2; d <= cap; d += 2) {
      int weight = evens.empty() ? d : 2 * d;  // f0 counts once, others twice
      if (weight > budget) continue;
      evens.push_back(d);
      pick_evens(budget - weight);
      evens.pop_back();
    }
  };
  pick_evens(dim_v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- gradings --------------------------------------------------------------

int SGoodGrading::f(int a) const {
  return static_cast<int>(std::count(deg.begin(), deg.end(), a));
}

int SGoodGrading::max_deg() const {
  int m = 0;
  for (int d : deg) m = std::max(m, std::abs(d));
  return m;
}

Subspace SGoodGrading::v_at(int a) const {
  std::vector<Vec> rows;
  const int n = space->dim;
  for (int i = 0; i < n; ++i)
    if (deg[i] == a) {
      Vec v(n, 0);
      v[i] = 1;
      rows.push_back(v);
    }
  return Subspace::span_rows(space->field, rows, n);
}

Subspace SGoodGrading::v_ge(int a) const {
  std::vector<Vec> rows;
  const int n = space->dim;
  for (int i = 0; i < n; ++i)
    if (deg[i] >= a) {
      Vec v(n, 0);
      v[i] = 1;
      rows.push_back(v);
    }
  return Subspace::span_rows(space->field, rows, n);
}

PieceLabel SGoodGrading::label() const {
  std::vector<int> f(max_deg() + 1, 0);
  for (int d : deg)
    if (d >= 0) f[d]++;
  // symmetric: count positives only; degree 0 counted once
  for (int a = 1; a <= max_deg(); ++a) {
    // f[a] currently counts positive-degree vectors only, which matches
  }
  while (!f.empty() && f.back() == 0) f.pop_back();
  return PieceLabel{f};
}

bool SGoodGrading::preserves_flag(const Mat& g) const {
  int lo = *std::min_element(deg.begin(), deg.end());
  int hi = max_deg();
  for (int a = lo; a <= hi; ++a) {
    Subspace vge = v_ge(a);
    for (int r = 0; r < vge.dim(); ++r)
      if (!vge.contains(mat_vec(g, vge.basis().row(r)))) return false;
  }
  return true;
}

bool check_s_good(const SGoodGrading& g) {
  const int n = g.space->dim;
  if (static_cast<int>(g.deg.size()) != n) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.deg[i] + g.deg[j] != 0 && g.space->gram.at(i, j) != 0) return false;
  int top = g.max_deg();
  for (int a = 0; a <= top; ++a) {
    if (g.f(a) != g.f(-a)) return false;
    if (g.f(a) < g.f(a + 2)) return false;
    if (a % 2 == 0 && g.f(a) % 2 != 0) return false;
  }
  return true;
}

std::vector<SGoodGrading> enumerate_s_good_gradings(const SpacePtr& space) {
  const int n = space->dim;
  std::vector<SGoodGrading> out;
  if (n == 0) {
    out.push_back({space, {}});
    return out;
  }
  const int bound = n - 1;
  std::vector<int> deg(n, -bound);
  for (;;) {
    SGoodGrading g{space, deg};
    if (check_s_good(g)) out.push_back(g);
    int i = 0;
    while (i < n && deg[i] == bound) deg[i++] = -bound;
    if (i == n) break;
    ++deg[i];
  }
  return out;
}

SGoodGrading grading_from_label(const SpacePtr& space, const PieceLabel& label) {
  const int n = space->dim;
  require(label.total_dim() == n, Errc::Precondition, "label dimension mismatch");
  // nonnegative degrees, descending: f(a) copies of a for a > 0, f(0)/2 zeros
  std::vector<int> half;
  for (int a = label.max_degree(); a >= 1; --a)
    for (int c = 0; c < label.at(a); ++c) half.push_back(a);
  for (int c = 0; c < label.at(0) / 2; ++c) half.push_back(0);
  require(static_cast<int>(half.size()) == n / 2, Errc::Precondition, "label not admissible");
  std::vector<int> deg(n);
  for (int i = 0; i < n / 2; ++i) {
    deg[i] = half[i];
    deg[n - 1 - i] = -half[i];
  }
  SGoodGrading g{space, deg};
  require(check_s_good(g), Errc::NotSGood, "label does not induce an s-good grading");
  return g;
}

// ---- membership ------------------------------------------------------------

Subspace quasi_radical(const QuadForm& q, const Subspace& w) {
  const FieldPtr& f = q.space()->field;
  const int d = w.dim();
  if (d == 0) return w;
  // radical of the polar form restricted to w
  Mat polar(f, d, d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t)
      polar.at(s, t) = q.bilinear(w.basis().row(s), w.basis().row(t));
  Subspace rad_coords = kernel(polar);  // in w-coordinates
  // inside the radical the form is additive; cut by its square-root functional
  std::vector<Vec> rad_rows;
  for (int r = 0; r < rad_coords.dim(); ++r) {
    Vec amb(w.ambient(), 0);
    for (int t = 0; t < d; ++t) {
      fel c = rad_coords.basis().at(r, t);
      if (c == 0) continue;
      for (int j = 0; j < w.ambient(); ++j)
        amb[j] = f->add(amb[j], f->mul(c, w.basis().at(t, j)));
    }
    rad_rows.push_back(amb);
  }
  if (rad_rows.empty()) return Subspace::zero(f, w.ambient());
  if (f->p() != 2) {
    // odd characteristic: Q vanishes on the radical automatically
    return Subspace::span_rows(f, rad_rows, w.ambient());
  }
  Mat ell(f, 1, static_cast<int>(rad_rows.size()));
  for (std::size_t t = 0; t < rad_rows.size(); ++t)
    ell.at(0, static_cast<int>(t)) = f->sqrt2(q.eval(rad_rows[t]));
  Subspace cut = kernel(ell);  // coords within the radical basis
  std::vector<Vec> out_rows;
  for (int r = 0; r < cut.dim(); ++r) {
    Vec amb(w.ambient(), 0);
    for (std::size_t t = 0; t < rad_rows.size(); ++t) {
      fel c = cut.basis().at(r, static_cast<int>(t));
      if (c == 0) continue;
      for (int j = 0; j < w.ambient(); ++j) amb[j] = f->add(amb[j], f->mul(c, rad_rows[t][j]));
    }
    out_rows.push_back(amb);
  }
  return Subspace::span_rows(f, out_rows, w.ambient());
}

bool restricted_nondegenerate(const QuadForm& q, const Subspace& w) {
  return quasi_radical(q, w).dim() == 0;
}

MembershipFlags membership(const QuadForm& q, const SGoodGrading& g) {
  require(check_s_good(g), Errc::NotSGood, "grading is not s-good");
  require(q.space()->dim == g.space->dim, Errc::Precondition, "space mismatch");
  MembershipFlags flags;
  Mat a = q.polarize();
  const int n = q.dim();
  const int top = g.max_deg();

  // filtered cone: A V_{>= c} in V_{>= c+2}, Q zero on V_{>= 0}
  flags.in_q_ge2 = true;
  for (int c = -top; c <= top && flags.in_q_ge2; ++c) {
    Subspace vge = g.v_ge(c);
    Subspace tgt = g.v_ge(c + 2);
    for (int r = 0; r < vge.dim() && flags.in_q_ge2; ++r)
      if (!tgt.contains(mat_vec(a, vge.basis().row(r)))) flags.in_q_ge2 = false;
  }
  if (flags.in_q_ge2 && !q.restricted_zero(g.v_ge(0))) flags.in_q_ge2 = false;

  // graded cone: A V_c in V_{c+2}, Q zero on V_c for c != -1
  flags.in_q2 = true;
  for (int i = 0; i < n && flags.in_q2; ++i) {
    Vec ei(n, 0);
    ei[i] = 1;
    Vec img = mat_vec(a, ei);
    for (int j = 0; j < n; ++j)
      if (img[j] != 0 && g.deg[j] != g.deg[i] + 2) {
        flags.in_q2 = false;
        break;
      }
  }
  for (int c = -top; c <= top && flags.in_q2; ++c) {
    if (c == -1) continue;
    if (!q.restricted_zero(g.v_at(c))) flags.in_q2 = false;
  }

  if (!flags.in_q2) return flags;

  // distinguished: even powers are isomorphisms, odd restrictions nondegenerate
  flags.in_q2_0 = true;
  for (int c = 0; c <= top && flags.in_q2_0; c += 2) {
    Subspace vm = g.v_at(-c);
    Mat an = mat_pow(a, c);
    std::vector<Vec> img;
    for (int r = 0; r < vm.dim(); ++r) img.push_back(mat_vec(an, vm.basis().row(r)));
    if (Subspace::span_rows(g.space->field, img, n).dim() != g.f(c)) flags.in_q2_0 = false;
  }
  for (int c = 1; c <= top && flags.in_q2_0; c += 2) {
    Subspace vm = g.v_at(-c);
    Mat an = mat_pow(a, (c - 1) / 2);
    std::vector<Vec> img;
    for (int r = 0; r < vm.dim(); ++r) img.push_back(mat_vec(an, vm.basis().row(r)));
    Subspace w = Subspace::span_rows(g.space->field, img, n);
    if (w.dim() != vm.dim()) {
      flags.in_q2_0 = false;  // not injective
      break;
    }
    if (!restricted_nondegenerate(q, w)) flags.in_q2_0 = false;
  }
  return flags;
}

Subspace q2_coefficient_space(const SGoodGrading& g) {
  require(check_s_good(g), Errc::NotSGood, "grading is not s-good");
  const SpacePtr& sp = g.space;
  const FieldPtr& f = sp->field;
  const int n = sp->dim;
  const int d = QuadForm::coeff_count(n);
  auto image = [&](int unit) {
    std::vector<fel> c(d, 0);
    c[unit] = 1;
    QuadForm q(sp, c);
    Mat a = q.polarize();
    Vec bad;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (g.deg[j] != g.deg[i] + 2) bad.push_back(a.at(j, i));
    // coefficients supported inside a single graded piece of degree != -1
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++idx)
        if (g.deg[i] == g.deg[j] && g.deg[i] != -1) bad.push_back(c[idx] == 0 ? 0 : 1);
    return bad;
  };
  int out_dim = 0;
  {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (g.deg[j] != g.deg[i] + 2) ++out_dim;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (g.deg[i] == g.deg[j] && g.deg[i] != -1) ++out_dim;
  }
  return kernel_of_linear_map(f, d, out_dim, image);
}

// ---- filtrations -----------------------------------------------------------

Filtration::Filtration(SpacePtr space, std::map<int, Subspace> steps) : space_(std::move(space)) {
  require(!steps.empty(), Errc::Precondition, "empty filtration");
  lo_ = steps.begin()->first;
  hi_ = steps.rbegin()->first;
  steps_.clear();
  Subspace prev;
  bool first = true;
  for (int a = lo_; a <= hi_; ++a) {
    auto it = steps.find(a);
    Subspace cur = (it != steps.end()) ? it->second : prev;
    require(it != steps.end() || !first, Errc::Precondition, "gap before first step");
    if (!first)
      require(prev.contains(cur), Errc::Precondition, "filtration is not decreasing");
    steps_.push_back(cur);
    prev = cur;
    first = false;
  }
}

Subspace Filtration::at(int a) const {
  if (a < lo_) return Subspace::full(space_->field, space_->dim);
  if (a > hi_) return Subspace::zero(space_->field, space_->dim);
  return steps_[a - lo_];
}

std::vector<std::pair<int, int>> Filtration::gr_dims() const {
  std::vector<std::pair<int, int>> out;
  for (int a = lo_ - 1; a <= hi_ + 1; ++a) {
    int d = at(a).dim() - at(a + 1).dim();
    if (d != 0) out.emplace_back(a, d);
  }
  return out;
}

PieceLabel Filtration::label() const {
  std::vector<int> f;
  for (auto [a, d] : gr_dims()) {
    if (a < 0) continue;
    if (a >= static_cast<int>(f.size())) f.resize(a + 1, 0);
    f[a] = d;
  }
  return PieceLabel{f};
}

int Filtration::top_degree() const {
  auto dims = gr_dims();
  return dims.empty() ? 0 : dims.back().first;
}

bool Filtration::operator==(const Filtration& o) const {
  int a0 = std::min(lo_, o.lo_), a1 = std::max(hi_, o.hi_);
  for (int a = a0; a <= a1; ++a)
    if (!(at(a) == o.at(a))) return false;
  return true;
}

bool Filtration::operator<(const Filtration& o) const {
  int a0 = std::min(lo_, o.lo_), a1 = std::max(hi_, o.hi_);
  for (int a = a0; a <= a1; ++a) {
    const Subspace x = at(a), y = o.at(a);
    if (x < y) return true;
    if (y < x) return false;
  }
  return false;
}

bool check_filtration(const Filtration& f) {
  const SpacePtr& sp = f.space();
  for (int a = f.lo() - 1; a <= f.hi() + 1; ++a) {
    if (!f.at(a).contains(f.at(a + 1))) return false;
    if (!(sp->perp(f.at(a)) == f.at(1 - a))) return false;
  }
  // associated graded must be s-good; build it and check
  try {
    GradedModel gm = graded_model(f);
    return check_s_good(gm.grading);
  } catch (const Error&) {
    return false;
  }
}

Filtration filtration_from_grading(const SGoodGrading& g) {
  std::map<int, Subspace> steps;
  int top = g.max_deg();
  for (int a = -top; a <= top + 1; ++a) steps[a] = g.v_ge(a);
  return Filtration(g.space, std::move(steps));
}

GradedModel graded_model(const Filtration& f) {
  const SpacePtr& sp = f.space();
  const FieldPtr& fld = sp->field;
  std::vector<Vec> lifts;
  std::vector<int> degs;
  for (int a = f.lo() - 1; a <= f.hi() + 1; ++a) {
    Quotient q = quotient_map(f.at(a), f.at(a + 1));
    for (int r = 0; r < q.section.rows(); ++r) {
      lifts.push_back(q.section.row(r));
      degs.push_back(a);
    }
  }
  const int m = static_cast<int>(lifts.size());
  require(m == sp->dim, Errc::InternalCheck, "graded dimension mismatch");
  Mat gram(fld, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      gram.at(i, j) = (degs[i] + degs[j] == 0) ? sp->pair(lifts[i], lifts[j]) : 0;
  SpacePtr gspace;
  try {
    gspace = make_symplectic(fld, gram);
  } catch (const Error&) {
    fail(Errc::NotCompatible, "graded pairing is degenerate");
  }
  GradedModel gm;
  gm.space = gspace;
  gm.grading = SGoodGrading{gspace, degs};
  gm.section = Mat::from_rows(fld, lifts, sp->dim);
  return gm;
}

namespace {

// evaluates the induced graded form via lifts through the given section
fel eval_induced(const QuadForm& q, const Mat& a, const SGoodGrading& grading,
                 const Mat& section, const Vec& x) {
  const SpacePtr& amb = q.space();
  const FieldPtr& f = amb->field;
  const int n = amb->dim;
  // lift of the degree-c component of x
  auto lift_component = [&](int c) {
    Vec out(n, 0);
    for (int t = 0; t < static_cast<int>(grading.deg.size()); ++t) {
      if (grading.deg[t] != c || x[t] == 0) continue;
      for (int j = 0; j < n; ++j) out[j] = f->add(out[j], f->mul(x[t], section.at(t, j)));
    }
    return out;
  };
  int top = grading.max_deg();
  fel acc = q.eval(lift_component(-1));
  for (int c = -top; c <= -2; ++c) {
    Vec xa = lift_component(c);
    if (vec_is_zero(xa)) continue;
    acc = f->add(acc, amb->pair(mat_vec(a, xa), lift_component(-c - 2)));
  }
  return acc;
}

}  // namespace

QuadForm induced_form(const QuadForm& q, const Filtration& f, const Mat* custom_section) {
  const SpacePtr& sp = f.space();
  Mat a = q.polarize();
  for (int c = f.lo() - 1; c <= f.hi(); ++c) {
    Subspace vge = f.at(c);
    Subspace tgt = f.at(c + 2);
    for (int r = 0; r < vge.dim(); ++r)
      require(tgt.contains(mat_vec(a, vge.basis().row(r))), Errc::NotCompatible,
              "A_Q does not shift the filtration by 2");
  }
  require(q.restricted_zero(f.at(0)), Errc::NotCompatible, "Q does not vanish on V_{>=0}");

  GradedModel gm = graded_model(f);
  const Mat& section = custom_section ? *custom_section : gm.section;
  require(section.rows() == gm.section.rows() && section.cols() == gm.section.cols(),
          Errc::Precondition, "section shape mismatch");
  const int m = gm.space->dim;
  std::vector<fel> coeffs(QuadForm::coeff_count(m));
  int idx = 0;
  const FieldPtr& fld = sp->field;
  for (int i = 0; i < m; ++i) {
    Vec ei(m, 0);
    ei[i] = 1;
    fel qi = eval_induced(q, a, gm.grading, section, ei);
    for (int j = i; j < m; ++j, ++idx) {
      if (i == j) {
        coeffs[idx] = qi;
      } else {
        Vec ej(m, 0);
        ej[j] = 1;
        Vec eij(m, 0);
        eij[i] = 1;
        eij[j] = 1;
        fel cross = fld->sub(
            fld->sub(eval_induced(q, a, gm.grading, section, eij), qi),
            eval_induced(q, a, gm.grading, section, ej));
        coeffs[idx] = cross;
      }
    }
  }
  return QuadForm(gm.space, std::move(coeffs));
}

bool zeta_membership(const QuadForm& q, const Filtration& f) {
  try {
    QuadForm qbar = induced_form(q, f);
    GradedModel gm = graded_model(f);
    return membership(qbar, gm.grading).in_q2_0;
  } catch (const Error&) {
    return false;
  }
}

Subspace q_ge2_coefficient_space(const Filtration& f) {
  const SpacePtr& sp = f.space();
  const FieldPtr& fld = sp->field;
  const int n = sp->dim;
  const int d = QuadForm::coeff_count(n);
  // complement coordinates for "image must land in V_{>= c+2}"
  std::vector<std::pair<Subspace, Quotient>> levels;
  for (int c = f.lo() - 1; c <= f.hi(); ++c) {
    Subspace vge = f.at(c);
    Subspace tgt = f.at(c + 2);
    levels.emplace_back(vge, quotient_map(Subspace::full(fld, n), tgt));
  }
  Subspace v0 = f.at(0);
  auto image = [&](int unit) {
    std::vector<fel> cf(d, 0);
    cf[unit] = 1;
    QuadForm q(sp, cf);
    Mat a = q.polarize();
    Vec bad;
    for (auto& [vge, quot] : levels)
      for (int r = 0; r < vge.dim(); ++r) {
        Vec proj = quot.project(mat_vec(a, vge.basis().row(r)));
        bad.insert(bad.end(), proj.begin(), proj.end());
      }
    auto restr = q.restrict_coeffs(v0.basis());
    bad.insert(bad.end(), restr.begin(), restr.end());
    return bad;
  };
  int out_dim = 0;
  for (auto& [vge, quot] : levels) out_dim += vge.dim() * quot.dim();
  out_dim += QuadForm::coeff_count(v0.dim());
  return kernel_of_linear_map(fld, d, out_dim, image);
}

std::vector<Filtration> enumerate_filtrations(const SpacePtr& space) {
  const int n = space->dim;
  const FieldPtr& f = space->field;
  std::vector<Filtration> out;
  std::map<int, std::vector<Subspace>> by_dim;
  auto subs_of_dim = [&](int d) -> const std::vector<Subspace>& {
    auto it = by_dim.find(d);
    if (it == by_dim.end()) it = by_dim.emplace(d, all_subspaces(f, n, d)).first;
    return it->second;
  };
  for (const PieceLabel& label : admissible_sequences(n)) {
    int top = label.max_degree();
    // dims of V_{>= a} for a >= 1
    std::vector<int> dims(top + 2, 0);  // dims[a] for a in [1, top+1]
    for (int a = top; a >= 1; --a) dims[a] = dims[a + 1] + label.at(a);
    std::vector<Subspace> chain(top + 2, Subspace::zero(f, n));
    std::function<void(int)> rec = [&](int a) {
      if (a == 0) {
        std::map<int, Subspace> steps;
        for (int b = 1; b <= top + 1; ++b) steps[b] = chain[b];
        for (int b = 0; b >= -top; --b) steps[b] = space->perp(chain[1 - b]);
        try {
          Filtration cand(space, std::move(steps));
          if (check_filtration(cand) && cand.label() == label) out.push_back(cand);
        } catch (const Error&) {
        }
        return;
      }
      for (const Subspace& s : subs_of_dim(dims[a])) {
        if (!s.contains(chain[a + 1])) continue;
        chain[a] = s;
        rec(a - 1);
      }
    };
    rec(top);
  }
  return out;
}

// ---- invariants and classifier ---------------------------------------------

namespace {

int nilpotency_index(const Mat& a) {
  const int n = a.rows();
  Mat cur = Mat::identity(a.field(), n);
  for (int e = 1; e <= n; ++e) {
    cur = mat_mul(cur, a);
    if (cur.is_zero()) return e;
  }
  fail(Errc::NotNilpotent, "matrix is not nilpotent");
}

// zero set in W of a form whose polar part vanishes on W (characteristic 2)
Subspace additive_zero_set(const QuadForm& q, const Mat& power, const Subspace& w) {
  const FieldPtr& f = q.space()->field;
  const int d = w.dim();
  // R(x) = Q(power * x) on W; cross terms must vanish
  std::vector<Vec> images;
  for (int t = 0; t < d; ++t) images.push_back(mat_vec(power, w.basis().row(t)));
  for (int s = 0; s < d; ++s)
    for (int t = s + 1; t < d; ++t)
      require(q.bilinear(images[s], images[t]) == 0, Errc::InternalCheck,
              "zero set of the iterated form is not linear");
  Mat ell(f, 1, d);
  for (int t = 0; t < d; ++t) ell.at(0, t) = f->sqrt2(q.eval(images[t]));
  Subspace cut = kernel(ell);  // in w-coordinates
  std::vector<Vec> rows;
  for (int r = 0; r < cut.dim(); ++r) {
    Vec amb(w.ambient(), 0);
    for (int t = 0; t < d; ++t) {
      fel c = cut.basis().at(r, t);
      if (c == 0) continue;
      for (int j = 0; j < w.ambient(); ++j)
        amb[j] = f->add(amb[j], f->mul(c, w.basis().at(t, j)));
    }
    rows.push_back(amb);
  }
  return Subspace::span_rows(f, rows, w.ambient());
}

}  // namespace

EFInvariants ef_invariants(const QuadForm& q) {
  const SpacePtr& sp = q.space();
  require(sp->dim > 0, Errc::ZeroSpace, "invariants need a nonzero space");
  require(sp->field->p() == 2, Errc::Precondition,
          "the H case split is defined in characteristic 2");
  Mat a = q.polarize();
  require(is_nilpotent(a), Errc::NotNilpotent, "polarization must be nilpotent");
  EFInvariants out;
  out.e = nilpotency_index(a);
  // f: smallest power killing the composed form
  out.f = 0;
  for (int c = 0;; ++c) {
    if (vec_is_zero(q.compose(mat_pow(a, c)).coeffs())) {
      out.f = c;
      break;
    }
  }
  out.m = std::max(out.e - 1, 2 * out.f - 1);
  if (out.e >= 2 * out.f + 1) {
    out.h = kernel(mat_pow(a, out.e - 1));
  } else if (out.e == 2 * out.f) {
    Subspace w = kernel(mat_pow(a, out.e - 1));
    out.h = additive_zero_set(q, mat_pow(a, out.f - 1), w);
  } else {
    out.h = additive_zero_set(q, mat_pow(a, out.f - 1), Subspace::full(sp->field, sp->dim));
  }
  return out;
}

ClassifyResult classify(const QuadForm& q) {
  const SpacePtr& sp = q.space();
  const FieldPtr& f = sp->field;
  const int n = sp->dim;
  Mat a = q.polarize();
  require(is_nilpotent(a), Errc::NotNilpotent, "classify needs a nilpotent form");
  if (n == 0) {
    std::map<int, Subspace> steps;
    steps[0] = Subspace::full(f, 0);
    steps[1] = Subspace::zero(f, 0);
    Filtration filt(sp, std::move(steps));
    return {filt, PieceLabel{{}}};
  }
  if (q.is_zero()) {
    std::map<int, Subspace> steps;
    steps[0] = Subspace::full(f, n);
    steps[1] = Subspace::zero(f, n);
    Filtration filt(sp, std::move(steps));
    return {filt, filt.label()};
  }
  int m;
  Subspace h;
  if (f->p() == 2) {
    EFInvariants ef = ef_invariants(q);
    m = ef.m;
    h = ef.h;
  } else {
    // odd characteristic: the polarization determines the filtration
    int e = nilpotency_index(a);
    m = e - 1;
    h = kernel(mat_pow(a, m));
  }
  require(m >= 1, Errc::InternalCheck, "nonzero form with trivial depth");
  Subspace vlo = h;
  Subspace vhi = sp->perp(h);
  require(vlo.contains(vhi), Errc::InternalCheck, "H is not coisotropic");
  require(vlo.dim() - vhi.dim() < n, Errc::InternalCheck, "no progress in the recursion");

  auto sub = subquotient_form(q, vlo, vhi);
  ClassifyResult inner = classify(sub.form);
  require(inner.filtration.top_degree() <= m - 1 || sub.space->dim == 0, Errc::InternalCheck,
          "inner filtration too deep");

  std::map<int, Subspace> steps;
  for (int c = -m + 1; c <= m; ++c) {
    Subspace inner_step = inner.filtration.at(c);
    std::vector<Vec> rows;
    for (int r = 0; r < vhi.dim(); ++r) rows.push_back(vhi.basis().row(r));
    for (int r = 0; r < inner_step.dim(); ++r)
      rows.push_back(sub.quot.lift(inner_step.basis().row(r)));
    steps[c] = Subspace::span_rows(f, rows, n);
  }
  steps[-m] = Subspace::full(f, n);
  steps[m + 1] = Subspace::zero(f, n);
  Filtration filt(sp, std::move(steps));
  return {filt, filt.label()};
}

// ---- witness and stabilizer -------------------------------------------------

namespace {

// B = I + sum of rank-one corrections (pair with `probe`, add `target`)
struct RankOne {
  Vec probe;   // functional x -> (probe, x)
  Vec target;  // vector added with that coefficient
};

Mat assemble(const SpacePtr& sp, const std::vector<RankOne>& corrections) {
  const FieldPtr& f = sp->field;
  const int n = sp->dim;
  Mat b = Mat::identity(f, n);
  for (const auto& c : corrections)
    for (int col = 0; col < n; ++col) {
      Vec e(n, 0);
      e[col] = 1;
      fel w = sp->pair(c.probe, e);
      if (w == 0) continue;
      for (int row = 0; row < n; ++row)
        b.at(row, col) = f->add(b.at(row, col), f->mul(w, c.target[row]));
    }
  return b;
}

Vec first_nonzero(const Subspace& s) {
  require(s.dim() >= 1, Errc::InternalCheck, "expected a nonzero subspace");
  return s.basis().row(0);
}

}  // namespace

bool witness_check(const QuadForm& q, const SGoodGrading& g, const Mat& b, std::string* why) {
  auto explain = [&](const char* s) {
    if (why) *why = s;
    return false;
  };
  const SpacePtr& sp = q.space();
  if (!(mat_mul(mat_mul(transpose(b), sp->gram), b) == sp->gram))
    return explain("not symplectic");
  if (!(q.compose(b).coeffs() == q.coeffs())) return explain("does not fix the form");
  if (g.preserves_flag(b)) return explain("preserves the whole flag");
  return true;
}

WitnessResult witness(const QuadForm& q, const SGoodGrading& g,
                      const std::vector<Mat>* fallback_group) {
  const SpacePtr& sp = q.space();
  const FieldPtr& f = sp->field;
  require(f->p() == 2, Errc::Precondition, "witness construction is stated in characteristic 2");
  MembershipFlags flags = membership(q, g);
  require(flags.in_q2 && !flags.in_q2_0, Errc::Precondition,
          "witness needs a non-distinguished graded form");
  Mat a = q.polarize();
  const int top = g.max_deg();

  auto try_paths = [&]() -> std::optional<WitnessResult> {
    // first failing mode: A not injective on some V_{-i}, i >= 2
    for (int i = 2; i <= top; ++i) {
      Subspace ker_lo = subspace_intersect(kernel(a), g.v_at(-i));
      if (ker_lo.dim() == 0) continue;
      Subspace ker_hi = subspace_intersect(kernel(a), g.v_at(i - 2));
      if (ker_hi.dim() == 0) return std::nullopt;  // theory says nonzero; bail to fallback
      Vec e_lo = first_nonzero(ker_lo), e_hi = first_nonzero(ker_hi);
      Mat b = assemble(sp, {{e_hi, e_lo}, {e_lo, e_hi}});
      if (witness_check(q, g, b)) return WitnessResult{b, WitnessPath::NonInjective};
      return std::nullopt;
    }
    // second: some even power map not an isomorphism
    for (int c = 2; c <= top; c += 2) {
      Subspace kerc = subspace_intersect(kernel(mat_pow(a, c)), g.v_at(-c));
      if (kerc.dim() == 0) continue;
      if (kerc.dim() < 2) return std::nullopt;
      Vec e = kerc.basis().row(0), fv = kerc.basis().row(1);
      std::vector<Vec> epow{e}, fpow{fv};
      for (int j = 1; j <= c; ++j) {
        epow.push_back(mat_vec(a, epow.back()));
        fpow.push_back(mat_vec(a, fpow.back()));
      }
      // e_{2j-c} = epow[j]; corrections pair degree 2j-c+2 into 2j-c
      std::vector<RankOne> corr;
      for (int j = 0; j <= c - 1; ++j) {
        corr.push_back({fpow[c - j - 1], epow[j]});
        corr.push_back({epow[c - j - 1], fpow[j]});
      }
      Mat b = assemble(sp, corr);
      if (witness_check(q, g, b)) return WitnessResult{b, WitnessPath::EvenNonIso};
      return std::nullopt;
    }
    // third: some odd restriction degenerate
    for (int d = 1; d <= top; d += 2) {
      int nn = (d - 1) / 2;
      Subspace vm = g.v_at(-d);
      Mat an = mat_pow(a, nn);
      std::vector<Vec> img;
      for (int r = 0; r < vm.dim(); ++r) img.push_back(mat_vec(an, vm.basis().row(r)));
      Subspace w = Subspace::span_rows(f, img, sp->dim);
      if (w.dim() != vm.dim()) return std::nullopt;  // injectivity failed; not this path
      Subspace qr = quasi_radical(q, w);
      if (qr.dim() == 0) continue;
      Vec xi = first_nonzero(qr);
      // unique preimage in V_{-d} under A^{nn}
      Mat sys(f, sp->dim, vm.dim());
      for (int t = 0; t < vm.dim(); ++t) {
        Vec col = mat_vec(an, vm.basis().row(t));
        for (int r2 = 0; r2 < sp->dim; ++r2) sys.at(r2, t) = col[r2];
      }
      auto coords = solve(sys, xi);
      if (!coords.has_value()) return std::nullopt;
      Vec e(sp->dim, 0);
      for (int t = 0; t < vm.dim(); ++t)
        for (int r2 = 0; r2 < sp->dim; ++r2)
          e[r2] = f->add(e[r2], f->mul((*coords)[t], vm.basis().at(t, r2)));
      std::vector<Vec> epow{e};
      for (int j = 1; j <= 2 * nn + 1; ++j) epow.push_back(mat_vec(a, epow.back()));
      if (!vec_is_zero(epow[2 * nn + 1])) return std::nullopt;
      std::vector<RankOne> corr;
      for (int j = 0; j <= 2 * nn; ++j) corr.push_back({epow[2 * nn - j], epow[j]});
      Mat b = assemble(sp, corr);
      if (witness_check(q, g, b)) return WitnessResult{b, WitnessPath::OddDegenerate};
      return std::nullopt;
    }
    return std::nullopt;
  };

  if (auto direct = try_paths()) return *direct;
  if (fallback_group) {
    for (const Mat& b : *fallback_group)
      if (witness_check(q, g, b)) return WitnessResult{b, WitnessPath::Exhaustive};
  }
  fail(Errc::ConstructionInapplicable, "no witness found");
}

bool stabilizer_subordinate(const QuadForm& q, const SGoodGrading& g,
                            const std::vector<Mat>& group) {
  for (const Mat& b : group) {
    if (!(q.compose(b).coeffs() == q.coeffs())) continue;
    if (!g.preserves_flag(b)) return false;
  }
  return true;
}

}  // namespace nilcone
