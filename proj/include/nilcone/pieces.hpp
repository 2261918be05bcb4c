#pragma once

// Gradings and filtrations of the symplectic space, the distinguished cones
// of quadratic forms attached to them, the (e, f, H, m) invariants, the
// normal-form classifier that assigns to every nilpotent form its unique
// compatible filtration, admissible piece labels, and the stabilizer /
// witness constructions that characterize the distinguished forms.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilcone/forms.hpp"

namespace nilcone {

// ---- piece labels ----------------------------------------------------------

/// An admissible, finitely supported symmetric integer sequence (f_a); only
/// the a >= 0 half is stored.  Indexes one piece of the dual nilpotent cone.
struct PieceLabel {
  std::vector<int> f;  // f[a] for a >= 0, trailing zeros trimmed

  int at(int a) const {
    int i = a < 0 ? -a : a;
    return i < static_cast<int>(f.size()) ? f[i] : 0;
  }
  int total_dim() const;
  int max_degree() const { return static_cast<int>(f.size()) - 1; }
  bool admissible(int dim_v) const;
  std::string str() const;
  bool operator==(const PieceLabel& o) const { return f == o.f; }
  bool operator<(const PieceLabel& o) const;  // lexicographic on (f_0, f_1, ...)
};

/// Complete duplicate-free list for the given even dimension, sorted in the
/// canonical (lexicographic) order.
std::vector<PieceLabel> admissible_sequences(int dim_v);

// ---- gradings --------------------------------------------------------------

struct SGoodGrading {
  SpacePtr space;
  std::vector<int> deg;  // degree of each coordinate basis vector

  int f(int a) const;
  int max_deg() const;
  Subspace v_at(int a) const;
  Subspace v_ge(int a) const;
  PieceLabel label() const;
  /// True iff the group element preserves every V_{>= a}.
  bool preserves_flag(const Mat& g) const;
};

bool check_s_good(const SGoodGrading& g);

/// All s-good degree assignments on the space's coordinate basis.
std::vector<SGoodGrading> enumerate_s_good_gradings(const SpacePtr& space);

/// A grading of the standard space realizing the given label (degrees paired
/// i <-> n+1-i with opposite signs).  Errors: Precondition if dims mismatch.
SGoodGrading grading_from_label(const SpacePtr& space, const PieceLabel& label);

// ---- membership in the distinguished cones ---------------------------------

struct MembershipFlags {
  bool in_q2 = false;
  bool in_q2_0 = false;
  bool in_q_ge2 = false;
};

/// Errors: NotSGood.
MembershipFlags membership(const QuadForm& q, const SGoodGrading& g);

/// {x in rad(B_Q|_W) : Q(x) = 0}, a subspace in ambient coordinates.
Subspace quasi_radical(const QuadForm& q, const Subspace& w);
bool restricted_nondegenerate(const QuadForm& q, const Subspace& w);

/// The linear subspace of coefficient space cut out by the closed conditions
/// of the graded cone (A_Q shifts degrees by 2, Q vanishes off degree -1).
Subspace q2_coefficient_space(const SGoodGrading& g);

// ---- filtrations -----------------------------------------------------------

class Filtration {
 public:
  Filtration() = default;
  /// steps[a] = V_{>= a}; values below/above the stored range clamp to the
  /// full/zero subspace.  The map must be inclusion-decreasing.
  Filtration(SpacePtr space, std::map<int, Subspace> steps);

  const SpacePtr& space() const { return space_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  Subspace at(int a) const;
  std::vector<std::pair<int, int>> gr_dims() const;  // (degree, dim gr_a), nonzero only
  PieceLabel label() const;
  int top_degree() const;  // largest a with gr_a != 0 (0 for the zero space)
  bool operator==(const Filtration& o) const;
  bool operator<(const Filtration& o) const;

 private:
  SpacePtr space_;
  int lo_ = 0, hi_ = -1;
  std::vector<Subspace> steps_;  // V_{>= lo_ + t}
};

/// Perp interlocking plus s-goodness of the associated graded.
bool check_filtration(const Filtration& f);

/// Filtration V_{>= a} = (span of degrees >= a) attached to a grading.
Filtration filtration_from_grading(const SGoodGrading& g);

/// The associated graded space: basis grouped by ascending degree, pairing
/// blocks (a, -a) inherited from the ambient form, with a section matrix of
/// lifts.  Errors: NotCompatible when the interlock fails.
struct GradedModel {
  SpacePtr space;
  SGoodGrading grading;
  Mat section;  // row per graded basis vector, ambient coordinates
};

GradedModel graded_model(const Filtration& f);

/// The graded form induced by Q: on x = sum x_a it evaluates
/// Q(lift x_{-1}) + sum_{a <= -2} (A_Q lift x_a, lift x_{-a-2}).
/// Preconditions (A_Q compatible with the filtration, Q zero on V_{>= 0}) are
/// enforced.  A custom section (same row layout as graded_model's) can be
/// supplied to exercise lift independence.  Errors: NotCompatible.
QuadForm induced_form(const QuadForm& q, const Filtration& f,
                      const Mat* custom_section = nullptr);

/// True iff Q is compatible with the filtration and the induced graded form
/// is distinguished.
bool zeta_membership(const QuadForm& q, const Filtration& f);

/// The linear subspace of coefficient space cut out by the closed conditions
/// of zeta (A_Q shifts the filtration by 2 and Q vanishes on V_{>= 0}).
Subspace q_ge2_coefficient_space(const Filtration& f);

/// Every rational filtration of the space, grouped by construction from the
/// admissible labels.  Intended for exhaustive verification at small sizes.
std::vector<Filtration> enumerate_filtrations(const SpacePtr& space);

// ---- invariants and the classifier -----------------------------------------

struct EFInvariants {
  int e = 0;  // smallest >= 1 with A^e = 0
  int f = 0;  // smallest >= 0 with Q(A^f x) identically zero
  int m = 0;  // max(e-1, 2f-1)
  Subspace h;
};

/// Characteristic 2 only (the case split for H is stated there).
/// Errors: ZeroSpace, NotNilpotent, Precondition (odd characteristic).
EFInvariants ef_invariants(const QuadForm& q);

struct ClassifyResult {
  Filtration filtration;
  PieceLabel label;
};

/// The unique filtration whose distinguished cone contains Q, computed by
/// peeling H off both ends and recursing on the middle subquotient.  Works in
/// any characteristic (odd characteristic runs on the polarization alone).
/// Errors: NotNilpotent.
ClassifyResult classify(const QuadForm& q);

// ---- witness and stabilizer checks ------------------------------------------

enum class WitnessPath { NonInjective, EvenNonIso, OddDegenerate, Exhaustive };

inline const char* witness_path_name(WitnessPath p) {
  switch (p) {
    case WitnessPath::NonInjective: return "non-injective";
    case WitnessPath::EvenNonIso: return "even-non-iso";
    case WitnessPath::OddDegenerate: return "odd-degenerate";
    case WitnessPath::Exhaustive: return "exhaustive";
  }
  return "?";
}

struct WitnessResult {
  Mat b;
  WitnessPath path;
};

/// For Q in the graded cone but not distinguished: a symplectic B fixing Q
/// that moves some V_{>= a}.  Falls back to searching the supplied group when
/// the direct constructions do not apply.  Characteristic 2 only.
/// Errors: Precondition (wrong membership or odd characteristic),
/// ConstructionInapplicable (no witness found even exhaustively).
WitnessResult witness(const QuadForm& q, const SGoodGrading& g,
                      const std::vector<Mat>* fallback_group = nullptr);

bool witness_check(const QuadForm& q, const SGoodGrading& g, const Mat& b,
                   std::string* why = nullptr);

/// True iff every group element fixing Q preserves the whole flag.
bool stabilizer_subordinate(const QuadForm& q, const SGoodGrading& g,
                            const std::vector<Mat>& group);

}  // namespace nilcone
