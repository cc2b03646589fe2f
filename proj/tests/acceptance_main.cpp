#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "quartsolve/dc_outer.hpp"
#include "quartsolve/feasible_set.hpp"
#include "quartsolve/harness.hpp"
#include "quartsolve/lewis.hpp"
#include "quartsolve/problems.hpp"
#include "quartsolve/quartic_forms.hpp"
#include "quartsolve/solvers.hpp"
#include "support/oracles.hpp"
#include "support/reference.hpp"

namespace fs = std::filesystem;
using quartsolve::Cone;
using quartsolve::ConeKind;
using quartsolve::FeasibleSet;
using quartsolve::Matrix;
using quartsolve::Preconditioner;
using quartsolve::QuarticForm;
using quartsolve::SolverConfig;
using quartsolve::Trace;
using quartsolve::Vector;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

/// First oracle-call count at which the f-relative gap drops to `target`.
long calls_to_f_gap(const Trace& trace, double f_star, double target) {
  for (const auto& rec : trace.records) {
    double gap = (rec.f_value - f_star) / std::max(std::abs(f_star), 1e-300);
    if (gap <= target) return rec.oracle_calls;
  }
  return -1;
}

SolverConfig make_config(double beta, long budget, double target) {
  SolverConfig config;
  config.beta = beta;
  config.max_oracle_calls = budget;
  config.target_rel_accuracy = target;
  return config;
}

// --- 1. regularity: uniform convexity and smoothness certificates ---------

Outcome criterion_regularity() {
  Stopwatch clock;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = quartsolve::gen_synthetic(50, 10, 0.2, 1000 + seed);
    auto ident = Preconditioner::identity(10);
    auto bounds = quartsolve::bounds_from_structure(inst.form, ident);
    double beta = std::sqrt(bounds.beta2);
    auto rng = qtest::make_rng(5000 + seed);
    for (int pair = 0; pair < 1000; ++pair) {
      Vector x = qtest::random_gaussian(rng, 10);
      Vector y = qtest::random_gaussian(rng, 10);
      double bregman = inst.form.eval_rho(x) - inst.form.eval_rho(y) -
                       inst.form.grad_rho(y).dot(x - y);
      if (bregman < (bounds.alpha2 / 3.0) * std::pow((x - y).norm(), 4) - 1e-9) {
        ++violations;
      }
      double grad_gap =
          (inst.form.grad_sqrt_rho(x) - inst.form.grad_sqrt_rho(y)).norm();
      if (grad_gap > 6.0 * beta * (x - y).norm() + 1e-9) ++violations;
    }
  }
  double elapsed = clock.seconds();
  Outcome out;
  out.pass = violations == 0 && elapsed < 10.0;
  out.detail = "20 seeds (m=50,n=10), 1000 pairs each, slack 1e-9, " +
               std::to_string(violations) + " violations, " + fmt(elapsed) + "s";
  return out;
}

// --- 2. gradient oracles against central finite differences ---------------

Outcome criterion_gradients() {
  int violations = 0;
  int checked = 0;
  auto check = [&](const std::function<double(const Vector&)>& f,
                   const Vector& point, const Vector& grad) {
    Vector fd = qtest::fd_gradient(f, point, 1e-6);
    ++checked;
    if ((grad - fd).norm() > 1e-5 * (1.0 + fd.norm())) ++violations;
  };

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto inst = quartsolve::gen_synthetic(50, 10, 0.2, 1100 + seed);
    auto rng = qtest::make_rng(5100 + seed);
    for (int i = 0; i < 100; ++i) {
      Vector x = qtest::random_gaussian(rng, 10);
      check([&](const Vector& p) { return inst.form.eval_rho(p); }, x,
            inst.form.grad_rho(x));
      if (inst.form.eval_rho(x) >= 1e-6) {
        check([&](const Vector& p) { return inst.form.eval_sqrt_rho(p); }, x,
              inst.form.grad_sqrt_rho(x));
      }
    }
  }

  auto pr = quartsolve::gen_phase_retrieval(4, 16, 1200);
  auto phi = [&](const Vector& p) {
    double out = 0.0;
    for (int i = 0; i < pr.qip.d.size(); ++i) {
      out += 2.0 * pr.qip.d(i) * pr.qip.factors[i].quad(p) -
             pr.qip.d(i) * pr.qip.d(i);
    }
    return out;
  };
  auto rng = qtest::make_rng(5200);
  for (int i = 0; i < 100; ++i) {
    Vector x = qtest::random_gaussian(rng, 8);
    check(phi, x, quartsolve::grad_phi(pr.qip, x));
  }

  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(checked) +
               " finite-difference checks (step 1e-6, rel tol 1e-5), " +
               std::to_string(violations) + " violations";
  return out;
}

// --- 3. homogenized-to-original accuracy transfer --------------------------

Outcome criterion_transfer() {
  int violations = 0;
  int records = 0;
  double worst_residual = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = quartsolve::gen_synthetic(50, 10, 0.2, 1300 + seed);
    auto ident = Preconditioner::identity(10);
    auto bounds = quartsolve::bounds_from_structure(inst.form, ident);
    FeasibleSet set({ConeKind::FullSpace}, inst.linear_term, ident);
    auto ref = qtest::reference_minimizer(inst.form, inst.linear_term);
    worst_residual = std::max(worst_residual, ref.grad_residual);

    auto config = make_config(std::sqrt(bounds.beta2), 20000, 1e-10);
    Vector y0 = set.initial_point();
    for (const auto& run :
         {quartsolve::solve_homgd(inst.form, set, config, y0),
          quartsolve::solve_agd_restart(inst.form, set, config, y0)}) {
      for (const auto& rec : run.trace.records) {
        ++records;
        double lhs = (rec.f_value - ref.f_star) / std::abs(ref.f_star);
        double rhs =
            (2.0 / 3.0) * (rec.sqrt_rho - ref.sqrt_rho_star) / ref.sqrt_rho_star;
        if (lhs > rhs + 1e-8) ++violations;
      }
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(records) + " trace records on 5 instances, slack 1e-8" +
               ", reference gradient residual " + fmt(worst_residual) + ", " +
               std::to_string(violations) + " violations";
  return out;
}

// --- 4. explicit iteration-count envelopes ---------------------------------

Outcome criterion_envelopes() {
  Stopwatch clock;
  int violations = 0;
  double tightest_margin = 1e30;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = quartsolve::gen_synthetic(50, 10, 0.2, 1400 + seed);
    auto ident = Preconditioner::identity(10);
    auto bounds = quartsolve::bounds_from_structure(inst.form, ident);
    FeasibleSet set({ConeKind::FullSpace}, inst.linear_term, ident);
    auto ref = qtest::reference_minimizer(inst.form, inst.linear_term);
    Vector y0 = set.initial_point();
    double f0 = quartsolve::scale_back(inst.form, inst.linear_term, y0).f_hom;
    double delta0 = (f0 - ref.f_star) / std::abs(ref.f_star);
    double ratio = std::sqrt(27.0) * bounds.kappa();
    auto config = make_config(std::sqrt(bounds.beta2), 400000, 0.0);

    auto plain = quartsolve::solve_homgd(inst.form, set, config, y0);
    long plain_calls = calls_to_f_gap(plain.trace, ref.f_star, 1e-2);
    double plain_envelope =
        12.0 * ratio *
        (std::max(std::log(4.0 * delta0), 0.0) + std::sqrt(1.0 / 1e-2));
    if (plain_calls < 0 || double(plain_calls) > plain_envelope) ++violations;
    if (plain_calls >= 0) {
      tightest_margin = std::min(tightest_margin, plain_envelope / plain_calls);
    }

    auto accel = quartsolve::solve_agd_restart(inst.form, set, config, y0);
    long accel_calls = calls_to_f_gap(accel.trace, ref.f_star, 1e-4);
    double accel_envelope = 16.0 * std::sqrt(ratio) *
                            (std::pow(delta0, 0.25) + std::pow(2.0, 0.25)) /
                            std::pow(1e-4, 0.25);
    if (accel_calls < 0 || double(accel_calls) > accel_envelope) ++violations;
    if (accel_calls >= 0) {
      tightest_margin = std::min(tightest_margin, accel_envelope / accel_calls);
    }
  }
  double elapsed = clock.seconds();
  Outcome out;
  out.pass = violations == 0 && elapsed < 60.0;
  out.detail = "20 seeds, plain at 1e-2 / restarted at 1e-4, " +
               std::to_string(violations) + " violations, tightest envelope margin " +
               fmt(tightest_margin) + "x, " + fmt(elapsed) + "s";
  return out;
}

// --- 5. method ordering on the ill-conditioned synthetic instance ----------

Outcome criterion_method_ordering() {
  Stopwatch clock;
  int wins = 0;
  const long budget = 30000;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = quartsolve::gen_synthetic(400, 200, 1.0 / 50.0, 1500 + seed);
    auto ident = Preconditioner::identity(200);
    auto bounds = quartsolve::bounds_from_structure(inst.form, ident);
    FeasibleSet set({ConeKind::FullSpace}, inst.linear_term, ident);
    Vector y0 = set.initial_point();
    auto config = make_config(std::sqrt(bounds.beta2), budget, 0.0);

    auto restart = quartsolve::solve_agd_restart(inst.form, set, config, y0);
    auto plain = quartsolve::solve_homgd(inst.form, set, config, y0);
    auto agd = quartsolve::solve_agd_traced(inst.form, set, config, y0);

    auto f_eval = [&](const Vector& x) {
      return inst.form.eval_rho(x) - inst.linear_term.dot(x);
    };
    auto f_grad = [&](const Vector& x) {
      return Vector(inst.form.grad_rho(x) - inst.linear_term);
    };
    Vector x0 = quartsolve::scale_back(inst.form, inst.linear_term, y0).x;
    auto armijo_cfg = make_config(1.0, budget, 1e-14);
    auto armijo = quartsolve::solve_gd_armijo(f_eval, f_grad, {ConeKind::FullSpace},
                                              x0, armijo_cfg);

    // f* from a damped-Newton polish plus the best value any method saw.
    auto ref = qtest::reference_minimizer(inst.form, inst.linear_term);
    double f_star = ref.f_star;
    for (const auto* trace :
         {&restart.trace, &plain.trace, &agd.trace, &armijo.trace}) {
      for (const auto& rec : trace->records) f_star = std::min(f_star, rec.f_value);
    }

    long calls_restart = calls_to_f_gap(restart.trace, f_star, 1e-6);
    long calls_plain = calls_to_f_gap(plain.trace, f_star, 1e-6);
    long calls_agd = calls_to_f_gap(agd.trace, f_star, 1e-6);
    long calls_armijo = calls_to_f_gap(armijo.trace, f_star, 1e-6);

    auto effective = [&](long calls) { return calls < 0 ? budget + 1 : calls; };
    bool win = calls_restart >= 0 &&
               calls_restart < effective(calls_plain) &&
               calls_restart < effective(calls_agd) &&
               calls_restart < effective(calls_armijo);
    if (win) ++wins;
    per_seed += (win ? " +" : " -");
    per_seed += std::to_string(calls_restart) + "/" + std::to_string(calls_plain) +
                "/" + std::to_string(calls_agd) + "/" + std::to_string(calls_armijo);
  }
  double elapsed = clock.seconds();
  Outcome out;
  out.pass = wins >= 4;
  out.detail = "restarted method first to f-gap 1e-6 on " + std::to_string(wins) +
               "/5 seeds (m=400,n=200,ratio 50; restart/plain/agd/armijo:" + per_seed +
               "), " + fmt(elapsed) + "s";
  return out;
}

// --- 6. weight fixed point: analytic rest point, contraction, iter bound ---

Outcome criterion_weights_fixed_point() {
  Stopwatch clock;
  bool ok = true;
  std::string notes;

  const int n_coord = 6;
  std::vector<quartsolve::PsdFactor> coord;
  for (int i = 0; i < n_coord; ++i) {
    Matrix u = Matrix::Zero(n_coord, 1);
    u(i, 0) = 1.0;
    coord.emplace_back(u);
  }
  auto coord_result = quartsolve::compute_weights(coord, 1.5, 1e-6);
  double rest = std::pow(double(n_coord), -1.0 / 3.0);
  double coord_err =
      (coord_result.tau.tau - Vector::Constant(n_coord, rest)).cwiseAbs().maxCoeff();
  double q_norm =
      std::pow(coord_result.tau.tau.array().pow(3.0).sum(), 1.0 / 3.0);
  if (coord_err > 1e-5 || std::abs(q_norm - 1.0) > 1e-5) ok = false;
  notes += "coordinate rest point err " + fmt(coord_err) + ", q-norm err " +
           fmt(std::abs(q_norm - 1.0));

  const double eps = 1e-6;
  const double p = 1.5;
  long worst_iters = 0;
  double worst_sum_err = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = qtest::make_rng(1600 + seed);
    std::vector<quartsolve::PsdFactor> factors;
    for (int i = 0; i < 40; ++i) {
      factors.emplace_back(qtest::random_gaussian_matrix(rng, 8, 2));
    }
    auto result = quartsolve::compute_weights(factors, p, eps);
    worst_iters = std::max(worst_iters, result.iterations);
    Vector scores = quartsolve::leverage_scores(factors, result.tau);
    worst_sum_err = std::max(worst_sum_err, std::abs(scores.sum() - 8.0));
  }
  // Iteration budget from the contraction estimate, one extra sweep allowed
  // for the final stationarity check.
  double iter_bound =
      ((p - 1.0) / (2.0 - p)) *
          std::max(std::log(std::log(2.0 * 40.0) / ((2.0 - p) * eps)), 0.0) +
      1.0 + 1.0;
  if (double(worst_iters) > iter_bound) ok = false;
  if (worst_sum_err > 1e-6) ok = false;
  notes += ", sum-of-scores err " + fmt(worst_sum_err) + ", iters " +
           std::to_string(worst_iters) + " vs bound " + fmt(iter_bound);

  auto rng = qtest::make_rng(1700);
  std::vector<quartsolve::PsdFactor> factors;
  for (int i = 0; i < 40; ++i) {
    factors.emplace_back(qtest::random_gaussian_matrix(rng, 8, 2));
  }
  quartsolve::PNorm pnorm(p);
  int contraction_violations = 0;
  for (int pair = 0; pair < 100; ++pair) {
    Vector a = qtest::random_gaussian(rng, 40).cwiseAbs() + Vector::Constant(40, 0.05);
    Vector b = qtest::random_gaussian(rng, 40).cwiseAbs() + Vector::Constant(40, 0.05);
    double before = quartsolve::log_inf_distance(a, b).value;
    double after = quartsolve::log_inf_distance(
        quartsolve::fixed_point_map(factors, quartsolve::WeightVector(a), pnorm).tau,
        quartsolve::fixed_point_map(factors, quartsolve::WeightVector(b), pnorm).tau)
        .value;
    if (after > (p - 1.0) * before + 1e-12) ++contraction_violations;
  }
  if (contraction_violations > 0) ok = false;
  notes += ", contraction violations " + std::to_string(contraction_violations);

  double elapsed = clock.seconds();
  Outcome out;
  out.pass = ok && elapsed < 10.0;
  out.detail = notes + ", " + fmt(elapsed) + "s";
  return out;
}

// --- 7. certified sandwich after the fixed point ----------------------------

Outcome criterion_sandwich() {
  bool ok = true;
  std::string notes;
  const double eps = 1e-3;
  const double p = 1.5;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto rng = qtest::make_rng(1800 + seed);
    std::vector<quartsolve::PsdFactor> factors;
    for (int i = 0; i < 40; ++i) {
      factors.emplace_back(qtest::random_gaussian_matrix(rng, 8, 2));
    }
    auto weights = quartsolve::compute_weights(factors, p, eps);
    auto cert = quartsolve::certify_ratio(factors, weights.tau, quartsolve::PNorm(p),
                                          10000, 1900 + seed, true);
    double hi_cap = std::exp(eps) * std::pow(8.0, 1.0 - 1.0 / p);
    if (!cert.rescaled_valid || cert.rescaled.lo < std::exp(-eps) - 1e-12 ||
        cert.rescaled.hi > hi_cap + 1e-12) {
      ok = false;
    }
    if (seed == 0) {
      notes += "interval [" + fmt(cert.rescaled.lo) + "," + fmt(cert.rescaled.hi) +
               "] in [" + fmt(std::exp(-eps)) + "," + fmt(hi_cap) + "]";
    }
  }

  auto rng = qtest::make_rng(1850);
  std::vector<quartsolve::PsdFactor> factors;
  for (int i = 0; i < 200; ++i) {
    factors.emplace_back(qtest::random_gaussian_matrix(rng, 8, 1));
  }
  auto opt = quartsolve::optimal_preconditioner_p2(factors, 2.0, eps);
  double lo = 1e30, hi = 0.0;
  for (int sample = 0; sample < 10000; ++sample) {
    Vector x = qtest::random_unit(rng, 8);
    double rho = 0.0;
    for (const auto& f : factors) rho += std::pow(f.quad(x), 2);
    double ratio = std::sqrt(rho) / (opt.scale * opt.b_hat.quad(x));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double wrapper_cap = 2.0 * std::exp(eps) * std::sqrt(8.0);
  if (lo < std::exp(-eps) - 1e-12 || hi > wrapper_cap + 1e-12) ok = false;
  notes += "; p=2 wrapper [" + fmt(lo) + "," + fmt(hi) + "] in [" +
           fmt(std::exp(-eps)) + "," + fmt(wrapper_cap) + "]";

  Outcome out;
  out.pass = ok;
  out.detail = notes;
  return out;
}

// --- 8. preconditioner ordering on coherent instances ----------------------

Outcome criterion_preconditioning() {
  Stopwatch clock;
  const long budget = 150000;
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    bool seed_ok = true;
    std::string cells;
    for (auto target : {quartsolve::CoherenceTarget::High,
                        quartsolve::CoherenceTarget::Low}) {
      auto inst = quartsolve::gen_coherent(500, 20, target, 100.0, 2000 + seed);
      const auto& factors = inst.form.factors();
      auto ref = qtest::reference_minimizer(inst.form, inst.linear_term);

      auto run_with = [&](Preconditioner norm, double beta) {
        FeasibleSet set({ConeKind::FullSpace}, inst.linear_term, std::move(norm));
        auto config = make_config(beta, budget, 0.0);
        auto result =
            quartsolve::solve_homgd(inst.form, set, config, set.initial_point());
        return calls_to_f_gap(result.trace, ref.f_star, 1e-4);
      };

      auto ident = Preconditioner::identity(20);
      auto ident_bounds = quartsolve::bounds_from_structure(inst.form, ident);
      long calls_ident = run_with(ident, std::sqrt(ident_bounds.beta2));

      double gamma = quartsolve::coherence(factors);
      auto b0 = quartsolve::sum_weighted(
          factors, Vector::Constant(500, 1.0 / std::sqrt(500.0)));
      long calls_b0 =
          run_with(Preconditioner::general(b0), std::sqrt(500.0 * gamma));

      auto opt = quartsolve::optimal_preconditioner_p2(factors, 2.0, 1e-3);
      long calls_bstar =
          run_with(Preconditioner::general(opt.b_hat),
                   std::exp(1e-3) * opt.upper_factor * opt.scale);

      long ident_floor = calls_ident < 0 ? budget : calls_ident;
      bool both_finished = calls_b0 > 0 && calls_bstar > 0;
      bool beat_ident = both_finished && 5 * calls_b0 <= ident_floor &&
                        5 * calls_bstar <= ident_floor;
      bool pair_ok;
      if (target == quartsolve::CoherenceTarget::High) {
        pair_ok = both_finished && 2 * calls_bstar <= calls_b0;
      } else {
        pair_ok = both_finished &&
                  std::max(calls_bstar, calls_b0) <=
                      1.5 * std::min(calls_bstar, calls_b0);
      }
      if (!(pair_ok && beat_ident)) seed_ok = false;
      cells += (target == quartsolve::CoherenceTarget::High ? " hi:" : " lo:");
      cells += std::to_string(calls_ident) + "/" + std::to_string(calls_b0) + "/" +
               std::to_string(calls_bstar);
    }
    if (seed_ok) ++wins;
    per_seed += (seed_ok ? " [+" : " [-") + cells + "]";
  }
  double elapsed = clock.seconds();
  Outcome out;
  out.pass = wins >= 4;
  out.detail = std::to_string(wins) +
               "/5 seeds satisfy the ordering (identity/uniform/optimal calls:" +
               per_seed + "), " + fmt(elapsed) + "s";
  return out;
}

// --- 9. difference-of-convex demos and orthant projections -----------------

Outcome criterion_dc_demos() {
  Stopwatch clock;
  bool ok = true;
  std::string notes;

  {
    auto inst = quartsolve::gen_phase_retrieval(8, 48, 2100);
    Vector d_floor = inst.qip.d.cwiseMax(1e-12);
    auto spectral = quartsolve::sum_weighted(inst.qip.factors, d_floor);
    Eigen::SelfAdjointEigenSolver<Matrix> es(spectral.dense());
    Vector x0 = es.eigenvectors().col(15) *
                std::pow(inst.qip.d.mean(), 0.25);
    quartsolve::DcConfig config;
    config.inner_rel_accuracy = 1e-6;
    auto result = quartsolve::dc_solve(inst.qip, config, x0, 400);
    double f0 = result.outer_trace.records.front().f_value;
    double f_final = quartsolve::eval_F(inst.qip, result.x);
    bool monotone = true;
    for (std::size_t k = 1; k < result.outer_trace.records.size(); ++k) {
      if (result.outer_trace.records[k].f_value >
          result.outer_trace.records[k - 1].f_value * (1.0 + 1e-10) + 1e-12) {
        monotone = false;
      }
    }
    if (!(monotone && f_final <= 1e-6 * f0)) ok = false;
    notes += "phase retrieval F/F0 " + fmt(f_final / f0) +
             (monotone ? " monotone" : " NOT monotone");
  }

  {
    auto inst = quartsolve::gen_dmc(12, 2, 0.8, 2200);
    Vector x0 = quartsolve::dmc_mds_start(inst);
    quartsolve::DcConfig config;
    config.inner_rel_accuracy = 1e-6;
    auto result = quartsolve::dc_solve(inst.qip, config, x0, 3000);
    double f0 = result.outer_trace.records.front().f_value;
    double f_final = quartsolve::eval_F(inst.qip, result.x);
    bool monotone = true;
    for (std::size_t k = 1; k < result.outer_trace.records.size(); ++k) {
      if (result.outer_trace.records[k].f_value >
          result.outer_trace.records[k - 1].f_value * (1.0 + 1e-10) + 1e-12) {
        monotone = false;
      }
    }
    if (!(monotone && f_final <= 1e-6 * f0)) ok = false;
    notes += "; distance completion F/F0 " + fmt(f_final / f0) +
             (monotone ? " monotone" : " NOT monotone");
  }

  int projection_violations = 0;
  auto rng = qtest::make_rng(2300);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector d(n);
      for (int i = 0; i < n; ++i) d(i) = 0.25 + (rng() % 100) / 25.0;
      Vector c = qtest::random_gaussian(rng, n);
      c(0) = std::abs(c(0)) + 0.1;
      FeasibleSet set({ConeKind::NonnegativeOrthant}, c, Preconditioner::diagonal(d));
      Vector y_hat = 2.0 * qtest::random_gaussian(rng, n);
      Vector got = set.project(y_hat);
      Vector want = qtest::qp_orthant_projection(y_hat, c, d);
      if ((got - want).norm() > 1e-8 * (1.0 + want.norm())) ++projection_violations;
    }
  }
  if (projection_violations > 0) ok = false;
  notes += "; orthant projections vs exhaustive oracle (n=2..6): " +
           std::to_string(projection_violations) + " violations";

  double elapsed = clock.seconds();
  Outcome out;
  out.pass = ok;
  out.detail = notes + ", " + fmt(elapsed) + "s";
  return out;
}

// --- 10. byte-identical reruns ---------------------------------------------

Outcome criterion_determinism() {
  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };

  bool ok = true;
  int compared = 0;
  for (const std::string& experiment : {std::string("custom"), std::string("lewis_demo")}) {
    fs::path dir_a = fs::temp_directory_path() / ("quartsolve_acc_a_" + experiment);
    fs::path dir_b = fs::temp_directory_path() / ("quartsolve_acc_b_" + experiment);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    quartsolve::HarnessOptions opts;
    opts.experiment = experiment;
    opts.seed = 42;
    opts.m = 40;
    opts.n = 8;
    opts.max_oracle_calls = 2000;
    opts.out_dir = dir_a.string();
    if (quartsolve::run_experiment(opts) != 0) ok = false;
    opts.out_dir = dir_b.string();
    if (quartsolve::run_experiment(opts) != 0) ok = false;

    for (const auto& entry : fs::directory_iterator(dir_a)) {
      ++compared;
      if (slurp(entry.path()) != slurp(dir_b / entry.path().filename())) ok = false;
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
  }
  Outcome out;
  out.pass = ok && compared >= 6;
  out.detail = std::to_string(compared) + " files compared across reruns of two experiments";
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"regularity certificates", criterion_regularity},
      {"gradient oracles", criterion_gradients},
      {"homogenization transfer", criterion_transfer},
      {"rate envelopes", criterion_envelopes},
      {"method ordering at ratio 50", criterion_method_ordering},
      {"weight fixed point", criterion_weights_fixed_point},
      {"sandwich certification", criterion_sandwich},
      {"preconditioner ordering", criterion_preconditioning},
      {"dc demos and projections", criterion_dc_demos},
      {"byte-identical reruns", criterion_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const auto& entry : entries) {
    ++index;
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& err) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + err.what();
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %2d. %s: %s\n", outcome.pass ? "PASS" : "FAIL", index,
                entry.name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
