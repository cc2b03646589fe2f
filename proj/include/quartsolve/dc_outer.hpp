#pragma once

#include <functional>
#include <vector>

#include "quartsolve/feasible_set.hpp"
#include "quartsolve/quartic_forms.hpp"
#include "quartsolve/solvers.hpp"

namespace quartsolve {

/// Quadratic inverse problem: recover x from targets dᵢ ≈ ⟨x, Bᵢx⟩ by
/// minimizing F(x) = Σᵢ(⟨x,Bᵢx⟩ − dᵢ)² over the cone.  Nonnegative targets
/// keep the subtracted part φ convex.
struct QipInstance {
  std::vector<PsdFactor> factors;
  Vector d;
  Cone cone;

  QipInstance(std::vector<PsdFactor> f, Vector targets, Cone k);
  int dim() const { return factors.empty() ? 0 : factors.front().dim(); }
};

double eval_F(const QipInstance& qip, const Vector& x);

/// ∇φ(x) = 4 Σᵢ dᵢ Bᵢ x for the concave-side linearization.
Vector grad_phi(const QipInstance& qip, const Vector& x);

/// Generalized problem handle for the outer loop; QipInstance and the Gram
/// based factorization problems both reduce to it.
struct DcProblem {
  QuarticForm form;
  Cone cone;
  std::function<double(const Vector&)> eval_objective;   // F
  std::function<Vector(const Vector&)> grad_concave;     // ∇φ

  static DcProblem from_qip(const QipInstance& qip);
};

enum class DcStopReason {
  Converged,          // relative F decrease under the threshold
  OuterLimit,
  DegenerateLinearTerm,  // ∇φ(x_k) vanished or fell in the polar cone
};

struct DcResult {
  Vector x;
  Trace outer_trace;
  DcStopReason stop = DcStopReason::OuterLimit;
  long total_inner_oracle_calls = 0;
};

enum class InnerSolverKind { HomGd, AgdRestart };

struct DcConfig {
  InnerSolverKind inner = InnerSolverKind::AgdRestart;
  double inner_rel_accuracy = 1e-4;
  long inner_max_oracle_calls = 20000;
  double outer_rel_decrease = 1e-8;
};

/// Difference-of-convex outer loop: linearize the concave part at x_k,
/// minimize ρ − ⟨∇φ(x_k), ·⟩ over the cone with a homogenized inner solver,
/// repeat.  F is monotone up to the inner tolerance.  A degenerate linear
/// term (zero, or inside the polar cone) returns x = 0 and stops, since the
/// majorant is then minimized at the origin.
DcResult dc_solve(const DcProblem& problem, const DcConfig& config,
                  const Vector& x0, long outer_iters);
DcResult dc_solve(const QipInstance& qip, const DcConfig& config,
                  const Vector& x0, long outer_iters);

}  // namespace quartsolve
