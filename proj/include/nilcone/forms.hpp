#pragma once

// Quadratic forms on a symplectic space, the polarization Q -> A_Q, the
// correspondence between sp(V)* and quadratic forms, the nilpotency test for
// dual functionals, and the triangularizing good-basis construction.
//
// A quadratic form is stored by its upper triangular coefficients q_{ij}
// (i <= j, row-major), so Q(x) = sum_{i<=j} q_{ij} x_i x_j.  The polarization
// A_Q is the endomorphism with (A_Q x, y) = Q(x+y) - Q(x) - Q(y).

#include <cstdint>
#include <memory>
#include <vector>

#include "nilcone/classical.hpp"
#include "nilcone/linalg.hpp"

namespace nilcone {

struct SymplecticSpace {
  FieldPtr field;
  int dim = 0;
  Mat gram;       // alternating, nondegenerate
  Mat gram_inv;
  Mat polarizer;  // (gram^T)^{-1}; A_Q = polarizer * M_Q

  fel pair(const Vec& x, const Vec& y) const;  // (x, y)
  /// {x : (x, u) = 0 for all u in U}
  Subspace perp(const Subspace& u) const;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

SpacePtr standard_symplectic(const FieldPtr& f, int r);        // dim 2r, split Gram
SpacePtr make_symplectic(const FieldPtr& f, const Mat& gram);  // validates

class QuadForm {
 public:
  QuadForm() = default;
  QuadForm(SpacePtr space, std::vector<fel> coeffs);

  static QuadForm zero(SpacePtr space);
  /// Coefficient odometer used by the census: digit t of idx (base q, least
  /// significant first) is the t-th upper triangular coefficient.
  static QuadForm from_index(SpacePtr space, std::uint64_t idx);

  const SpacePtr& space() const { return sp_; }
  const std::vector<fel>& coeffs() const { return c_; }
  int dim() const { return sp_->dim; }
  static int coeff_count(int dim) { return dim * (dim + 1) / 2; }

  fel coeff(int i, int j) const { return c_[tri_index(i, j)]; }
  fel eval(const Vec& x) const;
  fel bilinear(const Vec& x, const Vec& y) const;  // Q(x+y) - Q(x) - Q(y)
  bool is_zero() const;

  Mat polarize() const;
  QuadForm compose(const Mat& m) const;  // x -> Q(m x)
  QuadForm add(const QuadForm& other) const;

  /// Coefficients of the restriction to the row span of `basis_rows`,
  /// expressed in those row coordinates.
  std::vector<fel> restrict_coeffs(const Mat& basis_rows) const;
  bool restricted_zero(const Subspace& u) const;

  int tri_index(int i, int j) const {  // i <= j
    return i * (2 * dim() - i + 1) / 2 + (j - i);
  }

 private:
  SpacePtr sp_;
  std::vector<fel> c_;
};

/// sp(V)* -> quadratic forms: pick X with tr(TX) = xi(T) for all T in sp,
/// return Q(a) = (Xa, a).  Errors: Precondition when the algebra is not sp.
QuadForm sigma_to_form(const LieAlgebra& sp_alg, const SpacePtr& space,
                       const DualFunctional& xi);
/// Inverse of sigma_to_form.
DualFunctional sigma_from_form(const LieAlgebra& sp_alg, const QuadForm& q);

/// True iff the polarization of the corresponding form is nilpotent.
bool nilpotent_dual_test(const LieAlgebra& sp_alg, const SpacePtr& space,
                         const DualFunctional& xi);

/// A basis indexed by the odd integers -2r+1, -2r+3, ..., 2r-1 (stored in
/// ascending index order) with (e_i, e_j) nonzero exactly when i + j = 0.
/// Sign convention away from characteristic 2: (e_i, e_{-i}) = 1 for i > 0.
struct GoodBasis {
  FieldPtr field;             // possibly an extension of the input field
  std::vector<fel> embed;     // input field -> `field`, identity if no extension
  std::uint32_t ext_degree = 1;
  int r = 0;
  Mat vectors;                // row t = e_{-2r+1+2t}, coordinates over `field`

  int index_of_row(int t) const { return -2 * r + 1 + 2 * t; }
};

/// The triangularizing construction: requires A_Q nilpotent.  May extend the
/// field by quadratic steps up to `extension_cap` (total degree over the
/// input).  Errors: NotNilpotent, ExtensionCapExceeded, InternalCheck (trace
/// coefficient obstruction).
GoodBasis good_basis(const QuadForm& q, std::uint32_t extension_cap = 8);

/// Checks the three defining properties; used by tests and the acceptance suite.
bool good_basis_check(const QuadForm& q, const GoodBasis& gb, std::string* why = nullptr);

/// Number of forms with the given polarization; A must satisfy (Ax, x) = 0.
/// Characteristic 2 only.  Errors: NotAlternating, Precondition.
std::uint64_t fiber_count(const SpacePtr& space, const Mat& a);

/// Quadratic form induced on W / W' together with the symplectic structure of
/// the subquotient.  Requires (W, W') = 0, Q|_{W'} = 0 and B_Q(W, W') = 0 so
/// that both the form and the pairing descend; the canonical section comes
/// from quotient_map.  Errors: NotASubspace, NotCompatible, InternalCheck
/// (degenerate descended pairing).
struct SubquotientForm {
  SpacePtr space;   // W / W'
  QuadForm form;
  Quotient quot;    // section rows live in the ambient space
};
SubquotientForm subquotient_form(const QuadForm& q, const Subspace& w, const Subspace& wp);

/// First nonzero isotropic vector of the form with the given upper-tri
/// coefficients on F^n (smallest coefficient-odometer index), extending the
/// field by degree 2 up to the cap when none exists rationally.
struct IsotropicSearch {
  FieldPtr field;
  std::vector<fel> embed;
  std::uint32_t ext_degree = 1;
  Vec vector;  // over `field`
};
IsotropicSearch find_isotropic(const FieldPtr& f, int n, const std::vector<fel>& coeffs,
                               std::uint32_t extension_cap);

}  // namespace nilcone
