#include "quartsolve/dc_outer.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace quartsolve {

namespace {

using Clock = std::chrono::steady_clock;

bool in_polar_cone(const Cone& cone, const Vector& c) {
  if (cone.kind == ConeKind::NonnegativeOrthant) {
    return c.maxCoeff() <= 0.0;
  }
  return c.lpNorm<Eigen::Infinity>() == 0.0;
}

Vector cone_clamp(const Cone& cone, const Vector& x) {
  return cone.kind == ConeKind::NonnegativeOrthant ? x.cwiseMax(0.0).eval() : x;
}

}  // namespace

QipInstance::QipInstance(std::vector<PsdFactor> f, Vector targets, Cone k)
    : factors(std::move(f)), d(std::move(targets)), cone(k) {
  if (factors.empty()) {
    throw BadShape("QipInstance: at least one factor required");
  }
  if (d.size() != static_cast<Eigen::Index>(factors.size())) {
    throw DimensionMismatch("QipInstance: one target per factor required");
  }
  const int n = factors.front().dim();
  for (const auto& factor : factors) {
    if (factor.dim() != n) {
      throw BadShape("QipInstance: factors have mixed dimensions");
    }
  }
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) >= 0.0)) {
      std::ostringstream os;
      os << "QipInstance: target " << i << " is negative (" << d(i)
         << "), the subtracted part would lose convexity";
      throw BadShape(os.str());
    }
  }
}

double eval_F(const QipInstance& qip, const Vector& x) {
  if (x.size() != qip.dim()) {
    throw DimensionMismatch("eval_F: point dimension mismatch");
  }
  double acc = 0.0;
  for (size_t i = 0; i < qip.factors.size(); ++i) {
    const double residual = qip.factors[i].quad(x) - qip.d(static_cast<Eigen::Index>(i));
    acc += residual * residual;
  }
  return acc;
}

Vector grad_phi(const QipInstance& qip, const Vector& x) {
  if (x.size() != qip.dim()) {
    throw DimensionMismatch("grad_phi: point dimension mismatch");
  }
  Vector g = Vector::Zero(x.size());
  for (size_t i = 0; i < qip.factors.size(); ++i) {
    const auto& u = qip.factors[i].U;
    g.noalias() += 4.0 * qip.d(static_cast<Eigen::Index>(i)) * (u * (u.transpose() * x));
  }
  return g;
}

DcProblem DcProblem::from_qip(const QipInstance& qip) {
  auto held = std::make_shared<QipInstance>(qip);
  DcProblem problem{QuarticForm::sum_of_squares(held->factors), held->cone, {}, {}};
  problem.eval_objective = [held](const Vector& x) { return eval_F(*held, x); };
  problem.grad_concave = [held](const Vector& x) { return grad_phi(*held, x); };
  return problem;
}

DcResult dc_solve(const DcProblem& problem, const DcConfig& config, const Vector& x0,
                  long outer_iters) {
  const auto t0 = Clock::now();
  const int dim = problem.form.dim();
  if (x0.size() != dim) {
    throw DimensionMismatch("dc_solve: starting point dimension mismatch");
  }
  const QuarticBounds bounds =
      bounds_from_structure(problem.form, Preconditioner::identity(dim));
  SolverConfig inner_config;
  inner_config.beta = std::sqrt(bounds.beta2);
  inner_config.max_oracle_calls = config.inner_max_oracle_calls;
  inner_config.target_rel_accuracy = config.inner_rel_accuracy;

  DcResult result;
  result.x = cone_clamp(problem.cone, x0);
  double objective = problem.eval_objective(result.x);
  const auto record = [&](long iter) {
    TraceRecord rec;
    rec.stage = 0;
    rec.iter = iter;
    rec.oracle_calls = result.total_inner_oracle_calls;
    rec.sqrt_rho = problem.form.eval_sqrt_rho(result.x);
    rec.f_value = objective;
    rec.time_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.outer_trace.records.push_back(rec);
  };
  record(0);
  if (objective == 0.0) {
    result.stop = DcStopReason::Converged;
    return result;
  }
  for (long k = 1; k <= outer_iters; ++k) {
    Vector linear_term = problem.grad_concave(result.x);
    if (in_polar_cone(problem.cone, linear_term)) {
      // The majorant ρ − ⟨c_k, ·⟩ is then minimized at the origin.
      result.x = Vector::Zero(dim);
      objective = problem.eval_objective(result.x);
      record(k);
      result.stop = DcStopReason::DegenerateLinearTerm;
      return result;
    }
    FeasibleSet set(problem.cone, linear_term, Preconditioner::identity(dim));
    const double reach = linear_term.dot(result.x);
    Vector y0 = reach > 0.0 ? Vector(result.x / reach) : set.initial_point();
    SolveResult inner = config.inner == InnerSolverKind::HomGd
                            ? solve_homgd(problem.form, set, inner_config, y0)
                            : solve_agd_restart(problem.form, set, inner_config, y0);
    result.total_inner_oracle_calls += inner.trace.total_oracle_calls();
    const double previous = objective;
    result.x = std::move(inner.x);
    objective = problem.eval_objective(result.x);
    record(k);
    if (previous - objective <= config.outer_rel_decrease * previous) {
      result.stop = DcStopReason::Converged;
      return result;
    }
  }
  result.stop = DcStopReason::OuterLimit;
  return result;
}

DcResult dc_solve(const QipInstance& qip, const DcConfig& config, const Vector& x0,
                  long outer_iters) {
  return dc_solve(DcProblem::from_qip(qip), config, x0, outer_iters);
}

}  // namespace quartsolve
