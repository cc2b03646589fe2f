#include "quartsolve/solvers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace quartsolve {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(const Clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_config(const SolverConfig& config) {
  if (!(config.beta > 0.0)) {
    throw ConfigError("solver config: beta must be positive");
  }
  if (!(config.armijo.c1 > 0.0 && config.armijo.c1 < 1.0)) {
    throw ConfigError("solver config: armijo.c1 must lie in (0,1)");
  }
  if (!(config.armijo.shrink > 0.0 && config.armijo.shrink < 1.0)) {
    throw ConfigError("solver config: armijo.shrink must lie in (0,1)");
  }
  if (!(config.armijo.grow >= 1.0)) {
    throw ConfigError("solver config: armijo.grow must be >= 1");
  }
}

double require_positive_rho(double rho, const char* where) {
  if (!(rho > 1e-300)) {
    std::ostringstream os;
    os << where << ": rho vanished on the slice (value " << rho << ")";
    throw ZeroRho(os.str());
  }
  return rho;
}

/// One fixed step of the homogenized model from `point` whose ρ-value is
/// already known: argmin of the linearization of √ρ plus 3β‖·‖²_B over the
/// slice.  Costs one gradient evaluation.
Vector fixed_step(const RhoOracle& oracle, const FeasibleSet& set, double beta,
                  const Vector& point, double rho_at_point, long& calls) {
  require_positive_rho(rho_at_point, "fixed_step");
  Vector grad = oracle.grad(point);
  ++calls;
  const double step = 1.0 / (12.0 * beta * std::sqrt(rho_at_point));
  return set.project(point - step * set.norm().apply_inverse(grad));
}

/// Gradient-mapping residual of a step y → y₊, measured on the unit-B-norm
/// representative of y.  The raw quantity ‖y₊−y‖_B·12β√ρ(y) is 3-homogeneous
/// in y while the target side |f_hom| is 0-homogeneous, so comparing them is
/// only meaningful at ‖y‖_B = 1; slices with a large linear term pin y far
/// from that scale and would otherwise pass the test immediately.
double step_residual(const FeasibleSet& set, double beta, const Vector& y, double rho_y,
                     const Vector& y_next) {
  const double y_norm = set.norm().norm(y);
  const double scale = y_norm * y_norm * y_norm;
  return set.norm().norm(y_next - y) * 12.0 * beta * std::sqrt(rho_y) / scale;
}

void append_record(Trace& trace, const Vector& linear_term, const Clock::time_point& t0,
                   int stage, long iter, long calls, double rho, const Vector& y) {
  TraceRecord rec;
  rec.stage = stage;
  rec.iter = iter;
  rec.oracle_calls = calls;
  rec.sqrt_rho = std::sqrt(rho);
  rec.f_value = scale_back_from(rho, linear_term.dot(y), y).f_hom;
  rec.time_ms = elapsed_ms(t0);
  trace.records.push_back(rec);
}

SolveResult solve_homgd_core(const RhoOracle& oracle, const FeasibleSet& set,
                             const SolverConfig& config, const Vector& y0) {
  check_config(config);
  const auto t0 = Clock::now();
  Trace trace;
  Vector y = set.project(y0);
  double rho = require_positive_rho(oracle.value(y), "solve_homgd");
  long calls = 0;
  append_record(trace, set.linear_term(), t0, 0, 0, calls, rho, y);
  for (long iter = 1; calls < config.max_oracle_calls; ++iter) {
    Vector y_next = fixed_step(oracle, set, config.beta, y, rho, calls);
    const double residual = step_residual(set, config.beta, y, rho, y_next);
    const double f_here =
        scale_back_from(rho, set.linear_term().dot(y), y).f_hom;
    y = std::move(y_next);
    rho = oracle.value(y);
    append_record(trace, set.linear_term(), t0, 0, iter, calls, rho, y);
    if (residual <= config.target_rel_accuracy * std::abs(f_here)) {
      break;
    }
  }
  SolveResult result;
  result.x = scale_back_from(rho, set.linear_term().dot(y), y).x;
  result.trace = std::move(trace);
  return result;
}

/// Shared accelerated loop.  Runs at most `num_iters` steps (negative means
/// budget-limited only), restarting nothing; momentum follows k/(k+3) from
/// zero.  Appends one record per step when `trace` is nonnull.
Vector agd_loop(const RhoOracle& oracle, const FeasibleSet& set, const SolverConfig& config,
                const Vector& start, long num_iters, long& calls, Trace* trace, int stage,
                const Clock::time_point& t0, double* rho_final) {
  Vector y_prev = start;
  Vector z = start;
  double rho_y = 0.0;
  bool have_rho_y = false;
  for (long k = 0; k < num_iters && calls < config.max_oracle_calls; ++k) {
    const double rho_z = require_positive_rho(oracle.value(z), "solve_agd");
    Vector y_next = fixed_step(oracle, set, config.beta, z, rho_z, calls);
    const double momentum = static_cast<double>(k) / static_cast<double>(k + 3);
    z = y_next + momentum * (y_next - y_prev);
    y_prev = std::move(y_next);
    rho_y = oracle.value(y_prev);
    have_rho_y = true;
    if (trace != nullptr) {
      append_record(*trace, set.linear_term(), t0, stage, k + 1, calls, rho_y, y_prev);
    }
  }
  if (rho_final != nullptr) {
    *rho_final = have_rho_y ? rho_y : oracle.value(y_prev);
  }
  return y_prev;
}

SolveResult solve_agd_traced_core(const RhoOracle& oracle, const FeasibleSet& set,
                                  const SolverConfig& config, const Vector& y0) {
  check_config(config);
  const auto t0 = Clock::now();
  Trace trace;
  Vector y = set.project(y0);
  double rho = require_positive_rho(oracle.value(y), "solve_agd");
  long calls = 0;
  append_record(trace, set.linear_term(), t0, 0, 0, calls, rho, y);
  y = agd_loop(oracle, set, config, y, config.max_oracle_calls, calls, &trace, 0, t0, &rho);
  SolveResult result;
  result.x = scale_back_from(rho, set.linear_term().dot(y), y).x;
  result.trace = std::move(trace);
  return result;
}

SolveResult solve_agd_restart_core(const RhoOracle& oracle, const FeasibleSet& set,
                                   const SolverConfig& config, const Vector& y0) {
  check_config(config);
  const auto t0 = Clock::now();
  Trace trace;
  Vector y_best = set.project(y0);
  double rho_best = require_positive_rho(oracle.value(y_best), "solve_agd_restart");
  long calls = 0;
  append_record(trace, set.linear_term(), t0, 0, 0, calls, rho_best, y_best);
  for (int stage = 0; calls < config.max_oracle_calls; ++stage) {
    const long stage_iters = 1L << std::min(stage, 40);
    double rho_stage = 0.0;
    Vector y_stage = agd_loop(oracle, set, config, y_best, stage_iters, calls, &trace,
                              stage, t0, &rho_stage);
    if (rho_stage < rho_best) {
      y_best = std::move(y_stage);
      rho_best = rho_stage;
    }
    trace.stage_best_sqrt_rho.push_back(std::sqrt(rho_best));
    if (calls >= config.max_oracle_calls) {
      break;
    }
    // Fixed-point probe from the incumbent: a plain descent step that both
    // makes monotone progress and exposes the gradient-mapping residual the
    // stopping rule needs.  The accelerated iterates themselves are
    // non-monotone, so the residual is only meaningful here.
    Vector y_probe = fixed_step(oracle, set, config.beta, y_best, rho_best, calls);
    const double residual = step_residual(set, config.beta, y_best, rho_best, y_probe);
    const double f_best =
        scale_back_from(rho_best, set.linear_term().dot(y_best), y_best).f_hom;
    const double rho_probe = oracle.value(y_probe);
    if (rho_probe < rho_best) {
      y_best = std::move(y_probe);
      rho_best = rho_probe;
    }
    append_record(trace, set.linear_term(), t0, stage, stage_iters + 1, calls, rho_best,
                  y_best);
    if (residual <= config.target_rel_accuracy * std::abs(f_best)) {
      break;
    }
  }
  SolveResult result;
  result.x = scale_back_from(rho_best, set.linear_term().dot(y_best), y_best).x;
  result.trace = std::move(trace);
  return result;
}

}  // namespace

RhoOracle RhoOracle::wrap(const QuarticForm& form) {
  RhoOracle oracle;
  oracle.value = [&form](const Vector& x) { return form.eval_rho(x); };
  oracle.grad = [&form](const Vector& x) { return form.grad_rho(x); };
  return oracle;
}

ScaleBackResult scale_back_from(double rho_y, double cy, const Vector& y) {
  require_positive_rho(rho_y, "scale_back");
  ScaleBackResult result;
  const double cy_pos = cy > 0.0 ? cy : 0.0;
  result.s = std::cbrt(cy_pos / (4.0 * rho_y));
  result.x = result.s * y;
  result.f_hom = -0.75 * result.s * cy_pos;
  return result;
}

ScaleBackResult scale_back(const QuarticForm& form, const Vector& linear_term,
                           const Vector& y) {
  return scale_back_from(form.eval_rho(y), linear_term.dot(y), y);
}

Vector homgd_step(const QuarticForm& form, const FeasibleSet& set,
                  const SolverConfig& config, const Vector& y_k) {
  check_config(config);
  RhoOracle oracle = RhoOracle::wrap(form);
  long calls = 0;
  return fixed_step(oracle, set, config.beta, y_k, form.eval_rho(y_k), calls);
}

SolveResult solve_homgd(const QuarticForm& form, const FeasibleSet& set,
                        const SolverConfig& config, const Vector& y0) {
  return solve_homgd_core(RhoOracle::wrap(form), set, config, y0);
}

SolveResult solve_homgd(const RhoOracle& oracle, const FeasibleSet& set,
                        const SolverConfig& config, const Vector& y0) {
  return solve_homgd_core(oracle, set, config, y0);
}

Vector solve_agd(const QuarticForm& form, const FeasibleSet& set, const SolverConfig& config,
                 const Vector& y0, long num_iters) {
  check_config(config);
  RhoOracle oracle = RhoOracle::wrap(form);
  long calls = 0;
  Vector start = set.project(y0);
  const auto t0 = Clock::now();
  return agd_loop(oracle, set, config, start, num_iters, calls, nullptr, 0, t0, nullptr);
}

SolveResult solve_agd_traced(const QuarticForm& form, const FeasibleSet& set,
                             const SolverConfig& config, const Vector& y0) {
  return solve_agd_traced_core(RhoOracle::wrap(form), set, config, y0);
}

SolveResult solve_agd_traced(const RhoOracle& oracle, const FeasibleSet& set,
                             const SolverConfig& config, const Vector& y0) {
  return solve_agd_traced_core(oracle, set, config, y0);
}

SolveResult solve_agd_restart(const QuarticForm& form, const FeasibleSet& set,
                              const SolverConfig& config, const Vector& y0) {
  return solve_agd_restart_core(RhoOracle::wrap(form), set, config, y0);
}

SolveResult solve_agd_restart(const RhoOracle& oracle, const FeasibleSet& set,
                              const SolverConfig& config, const Vector& y0) {
  return solve_agd_restart_core(oracle, set, config, y0);
}

SolveResult solve_gd_armijo(const std::function<double(const Vector&)>& f_eval,
                            const std::function<Vector(const Vector&)>& f_grad, Cone cone,
                            const Vector& x0, const SolverConfig& config,
                            const std::function<double(const Vector&)>& aux_metric) {
  check_config(config);
  const auto t0 = Clock::now();
  const auto cone_project = [&cone](const Vector& v) -> Vector {
    return cone.kind == ConeKind::NonnegativeOrthant ? v.cwiseMax(0.0).eval() : v;
  };
  Vector x = cone_project(x0);
  double f = f_eval(x);
  long calls = 0;
  Trace trace;
  const auto record = [&](long iter) {
    TraceRecord rec;
    rec.stage = 0;
    rec.iter = iter;
    rec.oracle_calls = calls;
    rec.sqrt_rho = aux_metric ? aux_metric(x) : 0.0;
    rec.f_value = f;
    rec.time_ms = elapsed_ms(t0);
    trace.records.push_back(rec);
  };
  record(0);
  double step = 1.0;
  for (long iter = 1; calls < config.max_oracle_calls; ++iter) {
    Vector grad = f_grad(x);
    ++calls;
    Vector x_next;
    double f_next = 0.0;
    bool accepted = false;
    while (step >= 1e-18) {
      x_next = cone_project(x - step * grad);
      f_next = f_eval(x_next);
      // Sufficient decrease measured through the realized move, which equals
      // the classical c1·step·‖∇f‖² criterion whenever the cone is inactive.
      const double move = (x_next - x).squaredNorm();
      if (f_next <= f - config.armijo.c1 / step * move) {
        accepted = true;
        break;
      }
      step *= config.armijo.shrink;
    }
    if (!accepted) {
      // At the floor the trial move is ~1e-18·‖∇f‖; if even that is a real
      // displacement the objective is misbehaving, otherwise the iterate has
      // converged to rounding noise and stopping is the right outcome.
      if (step * grad.norm() > 1e-12 * (1.0 + x.norm())) {
        throw LineSearchStall("solve_gd_armijo: no acceptable step above 1e-18");
      }
      break;
    }
    const double movement = (x_next - x).norm();
    x = std::move(x_next);
    f = f_next;
    record(iter);
    if (movement <= 1e-15 * (1.0 + x.norm())) {
      break;
    }
    step *= config.armijo.grow;
  }
  SolveResult result;
  result.x = std::move(x);
  result.trace = std::move(trace);
  return result;
}

}  // namespace quartsolve
