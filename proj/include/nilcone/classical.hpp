#pragma once

// Concrete models of gl(V), sp(V) and so(V) inside End(V) over a small finite
// field, with their duals.  Forms are fixed once and for all in split shape:
//
//   sp:  (e_i, e_{n+1-i}) = 1 for i <= n/2 and -1 above (all 1 in char 2),
//   so:  ambient quadratic form sum_{i<=r} x_i x_{n+1-i}, polar Gram the full
//        antidiagonal.
//
// With these conventions the upper triangular part of each algebra is a Borel
// subalgebra, and the dual of g is coordinatized by the canonical echelon
// basis produced by build_algebra.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilcone/linalg.hpp"

namespace nilcone {

enum class Kind { A, C, D };

inline char kind_char(Kind k) { return k == Kind::A ? 'A' : k == Kind::C ? 'C' : 'D'; }
Kind kind_from_string(const std::string& s);

struct LieAlgebra {
  Kind kind = Kind::A;
  int vdim = 0;
  FieldPtr field;
  Mat gram;                  // bilinear form of the kind (unused for A)
  std::vector<fel> qamb;     // kind D: ambient quadratic form, upper-tri coeffs
  std::vector<Mat> basis;    // canonical basis of g inside End(V)
  Mat basis_rows;            // dim() x vdim^2, flattened basis (row-major)

  int dim() const { return static_cast<int>(basis.size()); }
  int rank() const { return kind == Kind::A ? vdim : vdim / 2; }

  /// Coordinates of T in the canonical basis.  Errors: Precondition if T is not in g.
  Vec coords(const Mat& t) const;
  Mat from_coords(const Vec& c) const;
  bool contains(const Mat& t) const;
};

/// Errors: OddDimension (kinds C, D with odd vdim).
LieAlgebra build_algebra(Kind kind, int vdim, FieldPtr field);

struct RootCount {
  Kind kind;
  int rank;
  long long n;
};

RootCount num_roots(Kind kind, int rank);

struct DualFunctional {
  const LieAlgebra* alg = nullptr;
  Vec coeffs;  // values on the canonical basis of g

  fel eval_coords(const Vec& gcoords) const {
    return dot(alg->field, coeffs, gcoords);
  }
  fel eval(const Mat& t) const { return eval_coords(alg->coords(t)); }
};

/// The equivariant isomorphism g -> g* for kinds A and D.  Errors: WrongKind.
DualFunctional transport_iso(const LieAlgebra& g, const Mat& t);

Mat adjoint_act(const Mat& g, const Mat& t);                       // g T g^{-1}
DualFunctional coadjoint_act(const LieAlgebra& alg, const Mat& g,  // xi(g^{-1} T g)
                             const DualFunctional& xi);

/// Grading data induced on g and g* by a degree assignment on V's basis.
struct AlgebraGrading {
  const LieAlgebra* alg = nullptr;
  std::vector<int> vdeg;
  std::map<int, Subspace> g_parts;      // g_i, in g-coordinates
  std::map<int, Subspace> gstar_parts;  // g*_j, in dual coordinates

  Subspace v_ge(int a) const;  // span of basis vectors of degree >= a
  Subspace v_at(int a) const;
  bool in_g_ge0(const Mat& group_elem) const;  // preserves every V_{>= a}
};

/// Errors: NotSGood when the degree assignment is incompatible with the form
/// (kinds C, D) or fails the s-good dimension rules (kind C).
AlgebraGrading grade_algebra(const LieAlgebra& alg, const std::vector<int>& vdeg);

/// Rational points of G by filtering the matrix space.  Deterministic order.
/// Errors: SizeLimitExceeded when the candidate space or the group order is
/// too large to enumerate.
std::vector<Mat> enumerate_group(Kind kind, int vdim, const FieldPtr& field,
                                 std::uint64_t max_order = 1000000);

/// Classical order formulas (A and C exact; D via the split SO formula).
std::uint64_t group_order(Kind kind, int vdim, std::uint64_t q);

/// Dickson invariant of an orthogonal transformation in characteristic 2.
int dickson_invariant(const LieAlgebra& so, const Mat& g);

/// Upper triangular elements of g, as a subspace in g-coordinates.
Subspace standard_borel(const LieAlgebra& alg);

/// All conjugates of the standard Borel under the given group elements.
std::vector<Subspace> rational_borels(const LieAlgebra& alg, const std::vector<Mat>& group);

bool vanishes_on(const DualFunctional& xi, const Subspace& subalgebra);
bool borel_nilpotent(const DualFunctional& xi, const std::vector<Subspace>& borels);

/// Helper used by tests: number of roots obtained by enumerating the standard
/// root systems (eps_i - eps_j etc.) rather than the closed formula.
long long enumerate_roots(Kind kind, int rank);

}  // namespace nilcone
