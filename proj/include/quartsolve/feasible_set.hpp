#pragma once

#include "quartsolve/operators.hpp"

namespace quartsolve {

enum class ConeKind { FullSpace, NonnegativeOrthant };

struct Cone {
  ConeKind kind = ConeKind::FullSpace;
};

/// Constraint geometry of the homogenized problem: a cone K intersected with
/// the hyperplane ⟨c,y⟩ = 1, carrying the norm in which projections are
/// exact.  Construction enforces:
///   - c has at least one nonzero entry,
///   - the slice is reachable from inside the cone (orthant: some cᵢ > 0,
///     otherwise AssumptionPolarViolated),
///   - orthant projections require an Identity or Diagonal norm
///     (general norms rejected with UnsupportedGeometry).
class FeasibleSet {
 public:
  FeasibleSet(Cone cone, Vector linear_term, Preconditioner norm);

  const Cone& cone() const { return cone_; }
  const Vector& linear_term() const { return c_; }
  const Preconditioner& norm() const { return norm_; }
  int dim() const { return static_cast<int>(c_.size()); }

  /// argmin over {y ∈ K, ⟨c,y⟩ = 1} of ‖y − ŷ‖_B; output satisfies
  /// ⟨c,y⟩ = 1 ± 1e-10 and lies in K exactly.
  Vector project(const Vector& y_hat) const;

  /// Scalar dual multiplier t* of the orthant projection:
  /// y = Π_K(ŷ + t* B⁻¹c) hits ⟨c,y⟩ = 1.  The map
  /// t ↦ ⟨c, Π_K(ŷ + t B⁻¹c)⟩ is nondecreasing, so bisection applies.
  double dual_bisection(const Vector& y_hat) const;

  /// project(B⁻¹c / ‖c‖²_*); feasible by construction.
  Vector initial_point() const;

  /// Membership in K (exact componentwise test for the orthant).
  bool in_cone(const Vector& x) const;

  /// ⟨B⁻¹c, ·⟩ direction and dual norm are used on every projection;
  /// cached here once.
  const Vector& inv_norm_linear_term() const { return b_inv_c_; }
  double dual_norm_linear_term() const { return c_dual_norm_; }

 private:
  Cone cone_;
  Vector c_;
  Preconditioner norm_;
  Vector b_inv_c_;
  double c_dual_norm_ = 0.0;
};

}  // namespace quartsolve
