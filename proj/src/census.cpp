#include "nilcone/census.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace nilcone {

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv("NILCONE_BUDGET")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_enum = v;
  }
  return b;
}

std::uint64_t enum_size_checked(std::uint64_t q, int dim, const Budget& budget) {
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) {
    if (total > budget.max_enum / q)
      fail(Errc::BudgetExceeded, "enumeration of q^" + std::to_string(dim) +
                                     " exceeds the budget of " + std::to_string(budget.max_enum));
    total *= q;
  }
  if (total > budget.max_enum)
    fail(Errc::BudgetExceeded, "enumeration exceeds the budget");
  return total;
}

int default_shards() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> shard_ranges(std::uint64_t total,
                                                                  int shards) {
  if (shards <= 0) shards = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t chunk = total / shards, rem = total % shards, lo = 0;
  for (int s = 0; s < shards; ++s) {
    std::uint64_t hi = lo + chunk + (static_cast<std::uint64_t>(s) < rem ? 1 : 0);
    out.emplace_back(lo, hi);
    lo = hi;
  }
  return out;
}

namespace {

using LabelCounts = std::vector<std::pair<std::string, std::uint64_t>>;

std::uint64_t qpow(std::uint64_t q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::uint64_t ms() const {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
  }
};

// runs worker(lo, hi, slot) on each shard, one thread per shard; the first
// worker exception is rethrown after all threads joined
template <class Slot, class Worker>
std::vector<Slot> run_sharded(std::uint64_t total, int shards, Worker worker) {
  auto ranges = shard_ranges(total, shards);
  std::vector<Slot> slots(ranges.size());
  std::vector<std::exception_ptr> errors(ranges.size());
  std::vector<std::thread> threads;
  threads.reserve(ranges.size());
  for (std::size_t s = 0; s < ranges.size(); ++s)
    threads.emplace_back([&, s] {
      try {
        worker(ranges[s].first, ranges[s].second, slots[s]);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return slots;
}

// packed coadjoint counter for F_2: rows of the polar Gram, reversed
std::uint64_t count_coadjoint_f2(int r, std::uint64_t lo, std::uint64_t hi) {
  const int n = 2 * r;
  std::uint64_t count = 0;
  std::vector<std::uint32_t> mrows(n), arows(n), cur(n), nxt(n);
  // coefficient bit layout: upper triangular row-major
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pos.emplace_back(i, j);
  for (std::uint64_t code = lo; code < hi; ++code) {
    std::fill(mrows.begin(), mrows.end(), 0);
    std::uint64_t bits = code;
    for (std::size_t t = 0; t < pos.size(); ++t) {
      if (bits & (1ull << t)) {
        auto [i, j] = pos[t];
        if (i != j) {  // squares polarize to zero
          mrows[i] |= 1u << j;
          mrows[j] |= 1u << i;
        }
      }
    }
    for (int i = 0; i < n; ++i) arows[i] = mrows[n - 1 - i];
    // nilpotency by repeated squaring
    cur = arows;
    std::uint64_t e = 1;
    while (e < static_cast<std::uint64_t>(n)) {
      for (int i = 0; i < n; ++i) {
        std::uint32_t acc = 0, b = cur[i];
        while (b) {
          int j = __builtin_ctz(b);
          b &= b - 1;
          acc ^= cur[j];
        }
        nxt[i] = acc;
      }
      cur.swap(nxt);
      e *= 2;
    }
    bool zero = true;
    for (int i = 0; i < n; ++i) zero &= cur[i] == 0;
    if (zero) ++count;
  }
  return count;
}

std::string kind_str(Kind k) { return std::string(1, kind_char(k)); }

}  // namespace

std::string CountReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["rank"] = rank;
  j["q"] = q;
  j["target"] = target;
  nlohmann::json c = nlohmann::json::object();
  for (auto& [label, v] : counts) c[label] = v;
  j["counts"] = c;
  j["total"] = total;
  if (expected) j["expected"] = *expected;
  j["status"] = ok ? "OK" : "FAILED";
  j["elapsed_ms"] = elapsed_ms;
  j["shards"] = shards;
  j["order"] = order;
  return j.dump(2);
}

std::string CountReport::csv_header() {
  return "kind,rank,q,target,label,count,expected,status,elapsed_ms";
}

std::string CountReport::to_csv() const {
  std::ostringstream out;
  std::string status = ok ? "OK" : "FAILED";
  std::string exp = expected ? std::to_string(*expected) : "";
  for (auto& [label, v] : counts)
    out << kind << ',' << rank << ',' << q << ',' << target << ',' << label << ',' << v << ','
        << exp << ',' << status << ',' << elapsed_ms << '\n';
  if (counts.empty())
    out << kind << ',' << rank << ',' << q << ',' << target << ",total," << total << ',' << exp
        << ',' << status << ',' << elapsed_ms << '\n';
  return out.str();
}

std::string CountReport::to_table() const {
  std::ostringstream out;
  out << "kind " << kind << "  rank " << rank << "  q " << q << "  target " << target << "\n";
  for (auto& [label, v] : counts) out << "  " << label << ": " << v << "\n";
  out << "  total " << total;
  if (expected) out << "  expected " << *expected;
  out << "  status " << (ok ? "OK" : "FAILED") << "  shards " << shards << "\n";
  return out.str();
}

CountReport count_nilpotent(Kind kind, int rank, std::uint32_t q, CountTarget target,
                            const Budget& budget, int shards) {
  Timer timer;
  if (shards <= 0) shards = default_shards();
  auto field = field_from_order(q);

  CountReport rep;
  rep.kind = kind_str(kind);
  rep.rank = rank;
  rep.q = q;
  rep.shards = shards;
  rep.target = target == CountTarget::Adjoint ? "adjoint" : "coadjoint";

  const int vdim = (kind == Kind::A) ? rank : 2 * rank;
  RootCount roots = num_roots(kind, rank);
  rep.expected = qpow(q, static_cast<int>(roots.n));

  std::uint64_t count = 0;
  if (target == CountTarget::Coadjoint && kind == Kind::C) {
    const int d = QuadForm::coeff_count(vdim);
    std::uint64_t total = enum_size_checked(q, d, budget);
    if (q == 2 && d <= 63) {
      auto slots = run_sharded<std::uint64_t>(total, shards,
                                              [&](std::uint64_t lo, std::uint64_t hi,
                                                  std::uint64_t& slot) {
                                                slot = count_coadjoint_f2(rank, lo, hi);
                                              });
      count = std::accumulate(slots.begin(), slots.end(), std::uint64_t{0});
    } else {
      auto space = standard_symplectic(field, rank);
      auto slots = run_sharded<std::uint64_t>(
          total, shards, [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& slot) {
            slot = 0;
            for (std::uint64_t i = lo; i < hi; ++i)
              if (is_nilpotent(QuadForm::from_index(space, i).polarize())) ++slot;
          });
      count = std::accumulate(slots.begin(), slots.end(), std::uint64_t{0});
    }
  } else if (target == CountTarget::Adjoint) {
    LieAlgebra alg = build_algebra(kind, vdim, field);
    std::uint64_t total = enum_size_checked(q, alg.dim(), budget);
    auto slots = run_sharded<std::uint64_t>(
        total, shards, [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& slot) {
          slot = 0;
          Vec c(alg.dim());
          for (std::uint64_t i = lo; i < hi; ++i) {
            std::uint64_t cc = i;
            for (auto& x : c) {
              x = static_cast<fel>(cc % q);
              cc /= q;
            }
            if (is_nilpotent(alg.from_coords(c))) ++slot;
          }
        });
    count = std::accumulate(slots.begin(), slots.end(), std::uint64_t{0});
  } else {
    // coadjoint for kinds A, D: the Borel-vanishing definition
    LieAlgebra alg = build_algebra(kind, vdim, field);
    std::uint64_t total = enum_size_checked(q, alg.dim(), budget);
    auto group = enumerate_group(kind, vdim, field);
    auto borels = rational_borels(alg, group);
    auto slots = run_sharded<std::uint64_t>(
        total, shards, [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& slot) {
          slot = 0;
          Vec c(alg.dim());
          for (std::uint64_t i = lo; i < hi; ++i) {
            std::uint64_t cc = i;
            for (auto& x : c) {
              x = static_cast<fel>(cc % q);
              cc /= q;
            }
            DualFunctional xi{&alg, c};
            if (borel_nilpotent(xi, borels)) ++slot;
          }
        });
    count = std::accumulate(slots.begin(), slots.end(), std::uint64_t{0});
  }

  rep.counts.emplace_back("nilpotent", count);
  rep.total = count;
  rep.ok = rep.total == *rep.expected;
  rep.elapsed_ms = timer.ms();
  return rep;
}

CountReport count_alternating_nilpotent(int r, std::uint32_t q, const Budget& budget,
                                        int shards) {
  Timer timer;
  if (shards <= 0) shards = default_shards();
  auto field = field_from_order(q);
  const int n = 2 * r;
  auto space = standard_symplectic(field, r);
  // {A : (Ax, x) = 0}: solve on matrix entries
  auto image = [&](int unit) {
    Mat a(field, n, n);
    a.data()[unit] = 1;
    Vec bad;
    for (int i = 0; i < n; ++i) {
      Vec ei(n, 0);
      ei[i] = 1;
      Vec ai = mat_vec(a, ei);
      bad.push_back(space->pair(ai, ei));
      for (int j = i + 1; j < n; ++j) {
        Vec ej(n, 0);
        ej[j] = 1;
        bad.push_back(field->add(space->pair(ai, ej), space->pair(mat_vec(a, ej), ei)));
      }
    }
    return bad;
  };
  Subspace alt = kernel_of_linear_map(field, n * n, QuadForm::coeff_count(n), image);
  require(alt.dim() == r * (2 * r - 1), Errc::InternalCheck, "alternating space dimension");
  std::uint64_t total = enum_size_checked(q, alt.dim(), budget);
  auto slots = run_sharded<std::uint64_t>(
      total, shards, [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t& slot) {
        slot = 0;
        SubspaceElements elems(alt);
        for (std::uint64_t i = lo; i < hi; ++i) {
          Vec flat = elems.element(i);
          Mat a(field, n, n);
          for (int t = 0; t < n * n; ++t) a.data()[t] = flat[t];
          if (is_nilpotent(a)) ++slot;
        }
      });
  CountReport rep;
  rep.kind = "C";
  rep.rank = r;
  rep.q = q;
  rep.target = "alternating";
  rep.shards = shards;
  rep.expected = qpow(q, 2 * r * r - 2 * r);
  rep.total = std::accumulate(slots.begin(), slots.end(), std::uint64_t{0});
  rep.counts.emplace_back("nilpotent", rep.total);
  rep.ok = rep.total == *rep.expected;
  rep.elapsed_ms = timer.ms();
  return rep;
}

CountReport piece_census(int r, std::uint32_t q, const Budget& budget, int shards) {
  Timer timer;
  if (shards <= 0) shards = default_shards();
  auto field = field_from_order(q);
  auto space = standard_symplectic(field, r);
  const int d = QuadForm::coeff_count(2 * r);
  std::uint64_t total = enum_size_checked(q, d, budget);

  using Slot = std::map<std::string, std::uint64_t>;
  auto slots = run_sharded<Slot>(total, shards,
                                 [&](std::uint64_t lo, std::uint64_t hi, Slot& slot) {
                                   for (std::uint64_t i = lo; i < hi; ++i) {
                                     auto qf = QuadForm::from_index(space, i);
                                     if (!is_nilpotent(qf.polarize())) continue;
                                     slot[classify(qf).label.str()]++;
                                   }
                                 });
  CountReport rep;
  rep.kind = "C";
  rep.rank = r;
  rep.q = q;
  rep.target = "per_piece";
  rep.shards = shards;
  rep.expected = qpow(q, 2 * r * r);
  std::map<std::string, std::uint64_t> merged;
  for (const PieceLabel& l : admissible_sequences(2 * r)) merged[l.str()] = 0;
  for (auto& slot : slots)
    for (auto& [k, v] : slot) merged[k] += v;
  rep.total = 0;
  for (auto& [k, v] : merged) {
    rep.counts.emplace_back(k, v);
    rep.total += v;
  }
  rep.ok = rep.total == *rep.expected;
  rep.elapsed_ms = timer.ms();
  return rep;
}

RatioResult ratio_check(const Filtration& filt, const Budget& budget) {
  const SpacePtr& sp = filt.space();
  const std::uint64_t q = sp->field->size();
  RatioResult out;
  // compatible cone of the filtration
  Subspace zspace = q_ge2_coefficient_space(filt);
  enum_size_checked(q, zspace.dim(), budget);
  SubspaceElements zelems(zspace);
  for (std::uint64_t i = 0; i < zelems.count(); ++i)
    if (zeta_membership(QuadForm(sp, zelems.element(i)), filt)) ++out.zeta_count;
  // distinguished cone of the graded model
  GradedModel gm = graded_model(filt);
  Subspace q2space = q2_coefficient_space(gm.grading);
  enum_size_checked(q, q2space.dim(), budget);
  SubspaceElements q2elems(q2space);
  for (std::uint64_t i = 0; i < q2elems.count(); ++i)
    if (membership(QuadForm(gm.space, q2elems.element(i)), gm.grading).in_q2_0)
      ++out.distinguished_count;
  require(out.distinguished_count > 0, Errc::NonIntegralRatio, "empty distinguished cone");
  require(out.zeta_count % out.distinguished_count == 0, Errc::NonIntegralRatio,
          "counts are not in integral ratio");
  std::uint64_t ratio = out.zeta_count / out.distinguished_count;
  out.d = 0;
  while (ratio % q == 0) {
    ratio /= q;
    ++out.d;
  }
  require(ratio == 1, Errc::NonIntegralRatio, "ratio is not a power of q");
  out.ok = true;
  return out;
}

// ---- fractions and interpolation --------------------------------------------

namespace {
long long llgcd(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace

Fraction Fraction::of(long long n, long long d) {
  require(d != 0, Errc::Precondition, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = llgcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return {n, d};
}

Fraction Fraction::add(const Fraction& o) const { return of(num * o.den + o.num * den, den * o.den); }
Fraction Fraction::sub(const Fraction& o) const { return of(num * o.den - o.num * den, den * o.den); }
Fraction Fraction::mul(const Fraction& o) const { return of(num * o.num, den * o.den); }
Fraction Fraction::div(const Fraction& o) const {
  require(o.num != 0, Errc::DivisionByZero, "division by zero fraction");
  return of(num * o.den, den * o.num);
}

std::string Fraction::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

PolyFitResult poly_fit(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points,
                       int degree_bound) {
  require(degree_bound >= 0, Errc::Precondition, "degree bound must be nonnegative");
  require(static_cast<int>(points.size()) >= degree_bound + 1, Errc::InsufficientPoints,
          "need at least degree_bound + 1 points");
  const int m = degree_bound + 1;
  // Lagrange interpolation through the first m points, exact rationals
  std::vector<Fraction> coeffs(m, Fraction::of(0));
  for (int i = 0; i < m; ++i) {
    // basis polynomial L_i, accumulated in coefficient form
    std::vector<Fraction> basis{Fraction::of(1)};
    Fraction denom = Fraction::of(1);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      // multiply by (x - x_j)
      std::vector<Fraction> next(basis.size() + 1, Fraction::of(0));
      for (std::size_t t = 0; t < basis.size(); ++t) {
        next[t + 1] = next[t + 1].add(basis[t]);
        next[t] = next[t].add(basis[t].mul(Fraction::of(-static_cast<long long>(points[j].first))));
      }
      basis = std::move(next);
      denom = denom.mul(Fraction::of(static_cast<long long>(points[i].first) -
                                     static_cast<long long>(points[j].first)));
    }
    Fraction scale = Fraction::of(static_cast<long long>(points[i].second)).div(denom);
    for (std::size_t t = 0; t < basis.size(); ++t)
      coeffs[t] = coeffs[t].add(basis[t].mul(scale));
  }
  PolyFitResult out;
  out.coeffs = coeffs;
  out.consistent = true;
  for (const auto& [x, y] : points) {
    Fraction acc = Fraction::of(0);
    Fraction xv = Fraction::of(static_cast<long long>(x));
    Fraction pw = Fraction::of(1);
    for (const auto& c : coeffs) {
      acc = acc.add(c.mul(pw));
      pw = pw.mul(xv);
    }
    if (!(acc == Fraction::of(static_cast<long long>(y)))) out.consistent = false;
  }
  out.integer_coeffs = true;
  for (const auto& c : coeffs) out.integer_coeffs &= c.is_integer();
  while (out.coeffs.size() > 1 && out.coeffs.back().num == 0) out.coeffs.pop_back();
  return out;
}

BorelReport borel_cross_check(int r, std::uint32_t q, const Budget& budget) {
  auto field = field_from_order(q);
  const int n = 2 * r;
  LieAlgebra alg = build_algebra(Kind::C, n, field);
  auto space = standard_symplectic(field, r);
  auto group = enumerate_group(Kind::C, n, field);
  auto borels = rational_borels(alg, group);
  std::uint64_t total = enum_size_checked(q, alg.dim(), budget);
  BorelReport rep;
  rep.borels = borels.size();
  rep.functionals = total;
  Vec c(alg.dim());
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t cc = i;
    for (auto& x : c) {
      x = static_cast<fel>(cc % q);
      cc /= q;
    }
    DualFunctional xi{&alg, c};
    bool by_borel = borel_nilpotent(xi, borels);
    bool by_form = nilpotent_dual_test(alg, space, xi);
    if (by_borel == by_form) {
      ++rep.agree;
    } else {
      ++rep.disagree;
      if (rep.disagreement_indices.size() < 16) rep.disagreement_indices.push_back(i);
    }
  }
  return rep;
}

CountReport transport_census(Kind kind, int vdim, std::uint32_t q, const Budget& budget) {
  Timer timer;
  require(kind != Kind::C, Errc::WrongKind, "transport census needs kind A or D");
  auto field = field_from_order(q);
  LieAlgebra alg = build_algebra(kind, vdim, field);
  std::uint64_t total = enum_size_checked(q, alg.dim(), budget);
  auto group = enumerate_group(kind, vdim, field);
  auto borels = rational_borels(alg, group);

  std::uint64_t adjoint_count = 0, coadjoint_count = 0;
  std::set<Vec> image, borel_set;
  Vec c(alg.dim());
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t cc = i;
    for (auto& x : c) {
      x = static_cast<fel>(cc % q);
      cc /= q;
    }
    Mat t = alg.from_coords(c);
    if (is_nilpotent(t)) {
      ++adjoint_count;
      image.insert(transport_iso(alg, t).coeffs);
    }
    DualFunctional xi{&alg, c};
    if (borel_nilpotent(xi, borels)) {
      ++coadjoint_count;
      borel_set.insert(c);
    }
  }
  int rank = kind == Kind::A ? vdim : vdim / 2;
  CountReport rep;
  rep.kind = kind_str(kind);
  rep.rank = rank;
  rep.q = q;
  rep.target = "transport";
  rep.shards = 1;
  std::uint64_t expect_one = qpow(q, static_cast<int>(num_roots(kind, rank).n));
  rep.expected = 2 * expect_one;
  rep.counts.emplace_back("adjoint", adjoint_count);
  rep.counts.emplace_back("coadjoint", coadjoint_count);
  rep.total = adjoint_count + coadjoint_count;
  rep.ok = adjoint_count == expect_one && coadjoint_count == expect_one &&
           image.size() == adjoint_count && image == borel_set;
  rep.elapsed_ms = timer.ms();
  return rep;
}

}  // namespace nilcone
