#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "quartsolve/feasible_set.hpp"
#include "quartsolve/quartic_forms.hpp"

namespace quartsolve {

struct ArmijoParams {
  double c1 = 1e-4;
  double shrink = 0.5;
  double grow = 2.0;
};

struct SolverConfig {
  /// Smoothness certificate for the fixed-step homogenized methods; the
  /// gradient of √ρ is Lipschitz with constant 6·beta in the chosen norm.
  double beta = 1.0;
  long max_oracle_calls = 20000;
  double target_rel_accuracy = 1e-9;
  ArmijoParams armijo;
  std::uint64_t seed = 0;
};

struct TraceRecord {
  int stage = 0;
  long iter = 0;
  long oracle_calls = 0;
  double sqrt_rho = 0.0;
  double f_value = 0.0;
  double time_ms = 0.0;
};

/// Per-iteration log of a solver run.  oracle_calls is strictly increasing
/// across records; each gradient evaluation of ρ is counted exactly once.
struct Trace {
  std::vector<TraceRecord> records;

  /// Best √ρ seen at the end of each restart stage (restarted method only);
  /// nonincreasing by construction.
  std::vector<double> stage_best_sqrt_rho;

  long total_oracle_calls() const {
    return records.empty() ? 0 : records.back().oracle_calls;
  }
};

/// Value/gradient access to ρ behind an indirection so callers can audit or
/// count evaluations.  Wrap a QuarticForm or substitute instrumented
/// callables in tests.
struct RhoOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;

  static RhoOracle wrap(const QuarticForm& form);
};

struct ScaleBackResult {
  Vector x;
  double s = 0.0;
  double f_hom = 0.0;
};

/// Optimal rescaling of a slice point back to the original problem:
/// s(y) = ([⟨c,y⟩]₊ / 4ρ(y))^{1/3}, x = s·y, and the attained objective
/// f(x) = −3·4^{−4/3}·([⟨c,y⟩]₊⁴/ρ(y))^{1/3}.
ScaleBackResult scale_back(const QuarticForm& form, const Vector& linear_term, const Vector& y);

/// Same from precomputed scalars; avoids re-evaluating ρ inside solver loops.
ScaleBackResult scale_back_from(double rho_y, double cy, const Vector& y);

/// One fixed-step projected gradient step on √ρ over the slice:
/// y₊ = project(y − (1/(12β√ρ(y))) B⁻¹∇ρ(y)).  Monotone in √ρ.
Vector homgd_step(const QuarticForm& form, const FeasibleSet& set,
                  const SolverConfig& config, const Vector& y_k);

struct SolveResult {
  Vector x;
  Trace trace;
};

/// Projected gradient on the homogenized objective with the fixed step
/// 1/(12β√ρ); stops when the scaled step size, measured on the unit-norm
/// representative of the iterate so the test is scale free, drops below
/// target_rel_accuracy·|f_hom| or the oracle budget is exhausted.
SolveResult solve_homgd(const QuarticForm& form, const FeasibleSet& set,
                        const SolverConfig& config, const Vector& y0);
SolveResult solve_homgd(const RhoOracle& oracle, const FeasibleSet& set,
                        const SolverConfig& config, const Vector& y0);

/// num_iters accelerated steps (momentum k/(k+3), restart-free); returns the
/// final iterate, which is not necessarily monotone in √ρ.
Vector solve_agd(const QuarticForm& form, const FeasibleSet& set,
                 const SolverConfig& config, const Vector& y0, long num_iters);

/// Accelerated method without restarts, traced and scaled back; the budget
/// alone decides the iteration count.
SolveResult solve_agd_traced(const QuarticForm& form, const FeasibleSet& set,
                             const SolverConfig& config, const Vector& y0);
SolveResult solve_agd_traced(const RhoOracle& oracle, const FeasibleSet& set,
                             const SolverConfig& config, const Vector& y0);

/// Scheduled restarts: stage t runs 2^t accelerated steps from the current
/// best, then keeps the better of {previous best, stage output} in √ρ.
SolveResult solve_agd_restart(const QuarticForm& form, const FeasibleSet& set,
                              const SolverConfig& config, const Vector& y0);
SolveResult solve_agd_restart(const RhoOracle& oracle, const FeasibleSet& set,
                              const SolverConfig& config, const Vector& y0);

/// Projected gradient with Armijo backtracking on a caller-supplied smooth
/// objective over the cone (baseline; the only adaptive-step method here).
/// `aux_metric`, when set, fills the sqrt_rho trace column.
SolveResult solve_gd_armijo(const std::function<double(const Vector&)>& f_eval,
                            const std::function<Vector(const Vector&)>& f_grad,
                            Cone cone, const Vector& x0, const SolverConfig& config,
                            const std::function<double(const Vector&)>& aux_metric = {});

}  // namespace quartsolve
