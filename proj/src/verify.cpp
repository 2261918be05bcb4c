#include "nilcone/verify.hpp"

#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace nilcone {

namespace {

std::uint64_t qpow(std::uint64_t q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

struct Runner {
  const VerifyOptions& opts;
  std::ostream* progress;
  std::vector<CheckResult> results;

  void emit(CheckResult r) {
    if (progress) {
      *progress << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "  " << r.name;
      if (!r.detail.empty()) *progress << "  (" << r.detail << ")";
      *progress << std::endl;
    }
    results.push_back(std::move(r));
  }

  template <class Fn>
  void item(const std::string& name, Fn fn) {
    CheckResult r;
    r.name = name;
    try {
      std::string detail;
      r.pass = fn(detail);
      r.detail = detail;
    } catch (const Error& e) {
      if (e.code() == Errc::BudgetExceeded || e.code() == Errc::SizeLimitExceeded) {
        r.skipped = true;
        r.detail = e.what();
      } else {
        r.pass = false;
        r.detail = e.what();
      }
    }
    emit(std::move(r));
  }
};

// every nilpotent form on the standard space of rank r over F_q
template <class Fn>
void for_each_nilpotent(const SpacePtr& space, const Budget& budget, Fn fn) {
  const std::uint64_t q = space->field->size();
  const int d = QuadForm::coeff_count(space->dim);
  std::uint64_t total = enum_size_checked(q, d, budget);
  for (std::uint64_t i = 0; i < total; ++i) {
    QuadForm qf = QuadForm::from_index(space, i);
    if (!is_nilpotent(qf.polarize())) continue;
    fn(qf);
  }
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.skipped && !r.pass) return false;
  return true;
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts, std::ostream* progress) {
  Runner run{opts, progress, {}};
  const Budget& budget = opts.budget;
  const int shards = opts.shards;

  // 1. coadjoint symplectic counts
  for (auto [r, q] : std::vector<std::pair<int, std::uint32_t>>{
           {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
    run.item("coadjoint-count-C-r" + std::to_string(r) + "-q" + std::to_string(q),
             [&, r, q](std::string& detail) {
               auto rep = count_nilpotent(Kind::C, r, q, CountTarget::Coadjoint, budget, shards);
               std::ostringstream os;
               os << rep.total << " of expected " << *rep.expected << " in " << rep.elapsed_ms
                  << "ms";
               detail = os.str();
               return rep.ok;
             });
  }

  // 2. adjoint counts: gl_n, so_4, and the alternating cone
  for (int n : {2, 3})
    for (std::uint32_t q : {2u, 3u}) {
      run.item("adjoint-count-A-n" + std::to_string(n) + "-q" + std::to_string(q),
               [&, n, q](std::string& detail) {
                 auto rep = count_nilpotent(Kind::A, n, q, CountTarget::Adjoint, budget, shards);
                 detail = std::to_string(rep.total) + " = q^" + std::to_string(n * (n - 1));
                 return rep.ok;
               });
    }
  for (std::uint32_t q : {2u, 3u}) {
    run.item("adjoint-count-D-r2-q" + std::to_string(q), [&, q](std::string& detail) {
      auto rep = count_nilpotent(Kind::D, 2, q, CountTarget::Adjoint, budget, shards);
      detail = std::to_string(rep.total) + " = q^4";
      return rep.ok;
    });
    run.item("alternating-count-r2-q" + std::to_string(q), [&, q](std::string& detail) {
      auto rep = count_alternating_nilpotent(2, q, budget, shards);
      detail = std::to_string(rep.total) + " = q^4";
      return rep.ok;
    });
  }

  // 3. transport bijections
  for (auto [kind, vdim, q] :
       std::vector<std::tuple<Kind, int, std::uint32_t>>{{Kind::A, 2, 2}, {Kind::A, 2, 3},
                                                          {Kind::D, 4, 2}}) {
    run.item(std::string("transport-") + kind_char(kind) + "-dim" + std::to_string(vdim) + "-q" +
                 std::to_string(q),
             [&, kind, vdim, q](std::string& detail) {
               auto rep = transport_census(kind, vdim, q, budget);
               std::map<std::string, std::uint64_t> m(rep.counts.begin(), rep.counts.end());
               detail = "adjoint " + std::to_string(m["adjoint"]) + ", coadjoint " +
                        std::to_string(m["coadjoint"]);
               return rep.ok;
             });
  }

  // 4. fiber counts over all alternating endomorphisms, r <= 2, q = 2
  for (int r : {1, 2}) {
    run.item("fiber-count-r" + std::to_string(r) + "-q2", [&, r](std::string& detail) {
      auto field = field_from_order(2);
      auto space = standard_symplectic(field, r);
      const int n = 2 * r;
      std::uint64_t checked = 0;
      std::uint64_t want = qpow(2, 2 * r);
      std::uint64_t total = enum_size_checked(2, n * n, budget);
      for (std::uint64_t code = 0; code < total; ++code) {
        Mat a(field, n, n);
        for (int i = 0; i < n * n; ++i) a.data()[i] = (code >> i) & 1;
        std::uint64_t got;
        try {
          got = fiber_count(space, a);
        } catch (const Error& e) {
          if (e.code() == Errc::NotAlternating) continue;
          throw;
        }
        if (got != want) return false;
        ++checked;
      }
      detail = std::to_string(checked) + " alternating maps, fiber " + std::to_string(want);
      return checked == qpow(2, r * (2 * r - 1));
    });
  }

  // 5. bijectivity: unique filtration per nilpotent form, classify recovers it
  for (int r : {1, 2})
    for (std::uint32_t q : {2u, 3u}) {
      run.item("filtration-bijectivity-r" + std::to_string(r) + "-q" + std::to_string(q),
               [&, r, q](std::string& detail) {
                 auto field = field_from_order(q);
                 auto space = standard_symplectic(field, r);
                 std::uint64_t nilp = 0;
                 bool per_form_ok = true;
                 for_each_nilpotent(space, budget, [&](const QuadForm& qf) {
                   ++nilp;
                   auto res = classify(qf);
                   if (!check_filtration(res.filtration) ||
                       !zeta_membership(qf, res.filtration) ||
                       !res.label.admissible(2 * r))
                     per_form_ok = false;
                 });
                 auto filts = enumerate_filtrations(space);
                 std::uint64_t incidences = 0;
                 for (const auto& vs : filts) {
                   SubspaceElements elems(q_ge2_coefficient_space(vs));
                   for (std::uint64_t i = 0; i < elems.count(); ++i)
                     if (zeta_membership(QuadForm(space, elems.element(i)), vs)) ++incidences;
                 }
                 std::ostringstream os;
                 os << nilp << " forms, " << filts.size() << " filtrations, " << incidences
                    << " incidences";
                 detail = os.str();
                 return per_form_ok && nilp == qpow(q, 2 * r * r) && incidences == nilp;
               });
    }

  // 6. invariant suite: e <= 2f+1, H = V_{>=-m+1}, m = max(e-1, 2f-1)
  for (int r : {1, 2}) {
    run.item("ef-invariants-r" + std::to_string(r) + "-q2", [&, r](std::string& detail) {
      auto field = field_from_order(2);
      auto space = standard_symplectic(field, r);
      std::uint64_t checked = 0;
      bool ok = true;
      for_each_nilpotent(space, budget, [&](const QuadForm& qf) {
        ++checked;
        auto ef = ef_invariants(qf);
        if (ef.e > 2 * ef.f + 1) ok = false;
        if (ef.m != std::max(ef.e - 1, 2 * ef.f - 1)) ok = false;
        auto res = classify(qf);
        int m = res.filtration.top_degree();
        if (!(ef.h == res.filtration.at(-m + 1))) ok = false;
        if (m != ef.m) ok = false;
      });
      detail = std::to_string(checked) + " nilpotent forms";
      return ok;
    });
  }

  // 7 and 8. witness and stabilizer dichotomy over every s-good grading
  for (int r : {1, 2}) {
    run.item("witness-suite-r" + std::to_string(r) + "-q2", [&, r](std::string& detail) {
      auto field = field_from_order(2);
      auto space = standard_symplectic(field, r);
      auto group = enumerate_group(Kind::C, 2 * r, field);
      std::uint64_t witnessed = 0;
      for (const auto& g : enumerate_s_good_gradings(space)) {
        SubspaceElements elems(q2_coefficient_space(g));
        for (std::uint64_t i = 0; i < elems.count(); ++i) {
          QuadForm qf(space, elems.element(i));
          auto flags = membership(qf, g);
          if (!flags.in_q2 || flags.in_q2_0) continue;
          auto w = witness(qf, g, &group);
          std::string why;
          if (!witness_check(qf, g, w.b, &why)) {
            detail = "witness check failed: " + why;
            return false;
          }
          ++witnessed;
        }
      }
      detail = std::to_string(witnessed) + " witnesses verified";
      return witnessed > 0;
    });
    run.item("stabilizer-suite-r" + std::to_string(r) + "-q2", [&, r](std::string& detail) {
      auto field = field_from_order(2);
      auto space = standard_symplectic(field, r);
      auto group = enumerate_group(Kind::C, 2 * r, field);
      std::uint64_t checked = 0;
      for (const auto& g : enumerate_s_good_gradings(space)) {
        SubspaceElements elems(q2_coefficient_space(g));
        for (std::uint64_t i = 0; i < elems.count(); ++i) {
          QuadForm qf(space, elems.element(i));
          if (!membership(qf, g).in_q2_0) continue;
          if (!stabilizer_subordinate(qf, g, group)) {
            detail = "distinguished form with a flag-moving stabilizer";
            return false;
          }
          ++checked;
        }
      }
      detail = std::to_string(checked) + " distinguished forms, |Sp| = " +
               std::to_string(group.size());
      return checked > 0;
    });
  }

  // 9. good basis on every nilpotent form
  for (int r : {1, 2})
    for (std::uint32_t q : {2u, 3u}) {
      run.item("good-basis-r" + std::to_string(r) + "-q" + std::to_string(q),
               [&, r, q](std::string& detail) {
                 auto field = field_from_order(q);
                 auto space = standard_symplectic(field, r);
                 std::uint64_t checked = 0, extended = 0;
                 bool ok = true;
                 for_each_nilpotent(space, budget, [&](const QuadForm& qf) {
                   auto gb = good_basis(qf);
                   std::string why;
                   if (!good_basis_check(qf, gb, &why)) ok = false;
                   if (gb.ext_degree > 1) ++extended;
                   ++checked;
                 });
                 detail = std::to_string(checked) + " forms, " + std::to_string(extended) +
                          " needed extensions";
                 return ok;
               });
    }

  // 10. polynomiality of the piece counts
  run.item("polynomiality-r1", [&](std::string& detail) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> zero_pts, reg_pts;
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
      auto rep = piece_census(1, q, budget, shards);
      if (!rep.ok) return false;
      std::map<std::string, std::uint64_t> m(rep.counts.begin(), rep.counts.end());
      zero_pts.emplace_back(q, m.at("f0=2"));
      reg_pts.emplace_back(q, m.at("f1=1"));
    }
    auto fit0 = poly_fit(zero_pts, 2);
    auto fit1 = poly_fit(reg_pts, 2);
    bool ok = fit0.consistent && fit0.integer_coeffs && fit0.coeffs.size() == 1 &&
              fit0.coeffs[0] == Fraction::of(1);
    ok = ok && fit1.consistent && fit1.integer_coeffs && fit1.coeffs.size() == 3 &&
         fit1.coeffs[0] == Fraction::of(-1) && fit1.coeffs[1] == Fraction::of(0) &&
         fit1.coeffs[2] == Fraction::of(1);
    detail = "piece sizes interpolate to 1 and q^2-1 over 7 field sizes";
    return ok;
  });
  run.item("polynomiality-r2", [&](std::string& detail) {
    std::vector<std::uint32_t> qs{2, 3, 4};
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::uint64_t>>> pts;
    for (auto q : qs) {
      auto rep = piece_census(2, q, budget, shards);
      if (!rep.ok) return false;
      for (auto& [label, v] : rep.counts) pts[label].emplace_back(q, v);
    }
    for (auto& [label, series] : pts) {
      auto fit = poly_fit(series, static_cast<int>(series.size()) - 1);
      if (!fit.consistent || !fit.integer_coeffs) {
        detail = "piece " + label + " has no integer interpolation";
        return false;
      }
    }
    // ratio exponent d must be the same power at every q
    for (const PieceLabel& label : admissible_sequences(4)) {
      std::set<int> ds;
      for (auto q : qs) {
        auto field = field_from_order(q);
        auto space = standard_symplectic(field, 2);
        auto filt = filtration_from_grading(grading_from_label(space, label));
        auto rr = ratio_check(filt, budget);
        if (!rr.ok) return false;
        ds.insert(rr.d);
      }
      if (ds.size() != 1) {
        detail = "piece " + label.str() + " has a q-dependent exponent";
        return false;
      }
    }
    detail = "4 pieces, integer interpolation and constant ratio exponent over q in {2,3,4}";
    return true;
  });

  // 11. the sp* <-> forms correspondence
  run.item("sigma-suite-r1-q2", [&](std::string& detail) {
    auto field = field_from_order(2);
    auto space = standard_symplectic(field, 1);
    LieAlgebra alg = build_algebra(Kind::C, 2, field);
    if (alg.dim() != QuadForm::coeff_count(2)) return false;
    auto group = enumerate_group(Kind::C, 2, field);
    std::set<std::vector<fel>> images;
    for (std::uint64_t code = 0; code < 8; ++code) {
      Vec c{static_cast<fel>(code & 1), static_cast<fel>((code >> 1) & 1),
            static_cast<fel>((code >> 2) & 1)};
      DualFunctional xi{&alg, c};
      auto qf = sigma_to_form(alg, space, xi);
      images.insert(qf.coeffs());
      if (!(sigma_from_form(alg, qf).coeffs == c)) return false;
      for (const Mat& g : group) {
        auto lhs = sigma_to_form(alg, space, coadjoint_act(alg, g, xi));
        auto rhs = qf.compose(*inverse(g));
        if (!(lhs.coeffs() == rhs.coeffs())) return false;
      }
    }
    detail = "8 functionals x 6 group elements, exhaustive";
    return images.size() == 8;
  });
  run.item("sigma-suite-r2-q2", [&](std::string& detail) {
    auto field = field_from_order(2);
    auto space = standard_symplectic(field, 2);
    LieAlgebra alg = build_algebra(Kind::C, 4, field);
    auto group = enumerate_group(Kind::C, 4, field);
    std::mt19937 rng(static_cast<std::uint32_t>(opts.seed));
    for (int trial = 0; trial < 1000; ++trial) {
      Vec c(alg.dim());
      for (auto& x : c) x = rng() % 2;
      DualFunctional xi{&alg, c};
      auto qf = sigma_to_form(alg, space, xi);
      if (!(sigma_from_form(alg, qf).coeffs == c)) return false;
      const Mat& g = group[rng() % group.size()];
      auto lhs = sigma_to_form(alg, space, coadjoint_act(alg, g, xi));
      auto rhs = qf.compose(*inverse(g));
      if (!(lhs.coeffs() == rhs.coeffs())) return false;
    }
    detail = "1000 seeded samples, seed " + std::to_string(opts.seed);
    return true;
  });

  return run.results;
}

}  // namespace nilcone
