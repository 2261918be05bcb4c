#pragma once

// Exact matrix and subspace algebra over a Field.  Vectors are coordinate
// rows; endomorphisms act on column vectors (mat_vec).  Subspaces are kept in
// reduced row echelon form, so equality of subspaces is equality of data.
//
// Row reduction has two interchangeable paths: a generic one for any field
// and a word-packed XOR path used when the field is F_2 and there are at most
// 64 columns.  Tests cross-check them on shared cases.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nilcone/gf.hpp"

namespace nilcone {

using Vec = std::vector<fel>;

class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr f, int rows, int cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

  static Mat identity(FieldPtr f, int n);
  static Mat zero(FieldPtr f, int rows, int cols) { return Mat(std::move(f), rows, cols); }
  static Mat from_rows(FieldPtr f, const std::vector<Vec>& rows, int cols);

  const FieldPtr& field() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  fel at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  fel& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  Vec row(int r) const { return Vec(a_.begin() + static_cast<std::size_t>(r) * cols_,
                                    a_.begin() + static_cast<std::size_t>(r + 1) * cols_); }
  Vec col(int c) const;
  void set_row(int r, const Vec& v);

  bool is_zero() const;
  bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  const std::vector<fel>& data() const { return a_; }
  std::vector<fel>& data() { return a_; }

 private:
  FieldPtr f_;
  int rows_ = 0, cols_ = 0;
  std::vector<fel> a_;
};

Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat mat_scale(const Mat& a, fel s);
Mat transpose(const Mat& a);
Vec mat_vec(const Mat& a, const Vec& x);   // column action
Vec vec_add(const FieldPtr& f, const Vec& a, const Vec& b);
fel dot(const FieldPtr& f, const Vec& a, const Vec& b);
bool vec_is_zero(const Vec& v);
Mat mat_pow(const Mat& a, std::uint64_t e);

struct Rref {
  Mat mat;                  // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column per kept row
  int rank = 0;
};

Rref rref(const Mat& m);          // dispatches to the packed path when possible
Rref rref_generic(const Mat& m);  // exposed for cross-checking
Rref rref_packed2(const Mat& m);  // F_2, cols <= 64 only

bool is_nilpotent(const Mat& m);  // Precondition: square
fel det(const Mat& m);
std::optional<Mat> inverse(const Mat& m);

/// One solution of A x = b (x, b column vectors), or nullopt if inconsistent.
/// Free variables are set to zero, which makes the solution canonical.
std::optional<Vec> solve(const Mat& a, const Vec& b);

class Subspace {
 public:
  Subspace() = default;

  static Subspace span(const Mat& rows);
  static Subspace span_rows(FieldPtr f, const std::vector<Vec>& rows, int ambient);
  static Subspace zero(FieldPtr f, int ambient);
  static Subspace full(FieldPtr f, int ambient);

  int ambient() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  const Mat& basis() const { return basis_; }
  const FieldPtr& field() const { return f_; }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator<(const Subspace& o) const;  // total order for dedup/sorting

  /// Coordinates of v in the basis rows, if v lies in the subspace.
  std::optional<Vec> coords(const Vec& v) const;

 private:
  FieldPtr f_;
  int ambient_ = 0;
  Mat basis_;  // RREF rows
};

/// Right-kernel of m as a canonical subspace of F^cols.
Subspace kernel(const Mat& m);
/// rank + kernel in one call.
std::pair<int, Subspace> rank_kernel(const Mat& m);

/// Annihilator in the coordinate pairing: {x : B x = 0} for B the basis rows.
Subspace annihilator(const Subspace& u);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);

/// Quotient W / W' with a canonical section (coset representatives taken from
/// the rows of W's echelon basis).  Errors: NotASubspace.
struct Quotient {
  Subspace whole, sub;
  Mat section;  // rows: representatives of a basis of W/W'
  int dim() const { return section.rows(); }
  /// Coordinates of [w] in the section basis; w must lie in W.
  Vec project(const Vec& w) const;
  /// Representative of the class with the given quotient coordinates.
  Vec lift(const Vec& qcoords) const;
};

Quotient quotient_map(const Subspace& w, const Subspace& wp);

/// Kernel of the linear map F^dim_in -> F^dim_out given by images of the unit
/// vectors.  Used to carve out solution spaces of linear conditions.
Subspace kernel_of_linear_map(const FieldPtr& f, int dim_in, int dim_out,
                              const std::function<Vec(int)>& image_of_unit);

/// Expresses v as a combination of the given rows, if possible.
std::optional<Vec> express_in_rows(const Mat& rows, const Vec& v);

/// All subspaces of F^n of dimension d, in a deterministic order.
std::vector<Subspace> all_subspaces(const FieldPtr& f, int n, int d);

/// Iterates all q^dim elements of a subspace (coefficient odometer over the
/// basis rows, first basis coefficient least significant).
class SubspaceElements {
 public:
  explicit SubspaceElements(Subspace s);
  std::uint64_t count() const { return count_; }
  Vec element(std::uint64_t idx) const;

 private:
  Subspace s_;
  std::uint64_t count_;
};

}  // namespace nilcone
