#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "quartsolve/dc_outer.hpp"
#include "quartsolve/errors.hpp"
#include "quartsolve/feasible_set.hpp"
#include "quartsolve/lewis.hpp"
#include "quartsolve/problems.hpp"
#include "quartsolve/quartic_forms.hpp"
#include "quartsolve/solvers.hpp"

namespace py = pybind11;
using quartsolve::Cone;
using quartsolve::ConeKind;
using quartsolve::Matrix;
using quartsolve::Vector;

namespace {

std::vector<quartsolve::PsdFactor> to_factors(const std::vector<Matrix>& mats) {
  std::vector<quartsolve::PsdFactor> factors;
  factors.reserve(mats.size());
  for (const auto& m : mats) factors.emplace_back(m);
  return factors;
}

Cone parse_cone(const std::string& name) {
  if (name == "full") return {ConeKind::FullSpace};
  if (name == "orthant") return {ConeKind::NonnegativeOrthant};
  throw quartsolve::ConfigError("cone must be 'full' or 'orthant', got '" + name + "'");
}

py::dict trace_to_dict(const quartsolve::Trace& trace) {
  std::vector<long> stage, iter, calls;
  std::vector<double> sqrt_rho, f_value;
  for (const auto& rec : trace.records) {
    stage.push_back(rec.stage);
    iter.push_back(rec.iter);
    calls.push_back(rec.oracle_calls);
    sqrt_rho.push_back(rec.sqrt_rho);
    f_value.push_back(rec.f_value);
  }
  py::dict out;
  out["stage"] = stage;
  out["iter"] = iter;
  out["oracle_calls"] = calls;
  out["sqrt_rho"] = sqrt_rho;
  out["f_value"] = f_value;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Homogenized first-order solvers for structured convex quartics";

  py::register_exception<quartsolve::Error>(m, "QuartsolveError");

  py::class_<quartsolve::QuarticForm>(m, "QuarticForm")
      .def_property_readonly("dim", &quartsolve::QuarticForm::dim)
      .def("eval_rho", &quartsolve::QuarticForm::eval_rho, py::arg("x"))
      .def("grad_rho", &quartsolve::QuarticForm::grad_rho, py::arg("x"))
      .def("eval_sqrt_rho", &quartsolve::QuarticForm::eval_sqrt_rho, py::arg("x"))
      .def("grad_sqrt_rho", &quartsolve::QuarticForm::grad_sqrt_rho, py::arg("x"));

  m.def(
      "sum_of_squares_form",
      [](const std::vector<Matrix>& factors) {
        return quartsolve::QuarticForm::sum_of_squares(to_factors(factors));
      },
      py::arg("factors"),
      "Quartic rho(x) = sum_i <x, U_i U_i^T x>^2 from the factor list");

  m.def("gram_form", &quartsolve::QuarticForm::gram, py::arg("n_rows"),
        py::arg("r_cols"), "Quartic rho(X) = ||X^T X||_F^2 on column-stacked X");

  m.def(
      "structural_bounds",
      [](const quartsolve::QuarticForm& form) {
        auto ident = quartsolve::Preconditioner::identity(form.dim());
        auto bounds = quartsolve::bounds_from_structure(form, ident);
        return py::make_tuple(bounds.alpha2, bounds.beta2);
      },
      py::arg("form"),
      "Certified (alpha^2, beta^2) of the Euclidean quartic sandwich");

  m.def(
      "solve",
      [](const quartsolve::QuarticForm& form, const Vector& c,
         const std::string& method, const std::string& cone, long max_oracle_calls,
         double target_rel_accuracy) {
        auto ident = quartsolve::Preconditioner::identity(form.dim());
        auto bounds = quartsolve::bounds_from_structure(form, ident);
        quartsolve::FeasibleSet set(parse_cone(cone), c, ident);
        quartsolve::SolverConfig config;
        config.beta = std::sqrt(bounds.beta2);
        config.max_oracle_calls = max_oracle_calls;
        config.target_rel_accuracy = target_rel_accuracy;
        Vector y0 = set.initial_point();
        quartsolve::SolveResult result;
        if (method == "homgd") {
          result = quartsolve::solve_homgd(form, set, config, y0);
        } else if (method == "agd_restart") {
          result = quartsolve::solve_agd_restart(form, set, config, y0);
        } else if (method == "agd") {
          result = quartsolve::solve_agd_traced(form, set, config, y0);
        } else {
          throw quartsolve::ConfigError(
              "method must be 'homgd', 'agd_restart' or 'agd', got '" + method + "'");
        }
        py::dict out;
        out["x"] = result.x;
        out["f"] = form.eval_rho(result.x) - c.dot(result.x);
        out["oracle_calls"] = result.trace.total_oracle_calls();
        out["trace"] = trace_to_dict(result.trace);
        return out;
      },
      py::arg("form"), py::arg("c"), py::arg("method") = "agd_restart",
      py::arg("cone") = "full", py::arg("max_oracle_calls") = 20000,
      py::arg("target_rel_accuracy") = 1e-9,
      "Minimize rho(x) - <c,x> over the cone through the homogenized slice");

  m.def(
      "scale_back",
      [](const quartsolve::QuarticForm& form, const Vector& c, const Vector& y) {
        auto result = quartsolve::scale_back(form, c, y);
        return py::make_tuple(result.x, result.s, result.f_hom);
      },
      py::arg("form"), py::arg("c"), py::arg("y"),
      "Optimal rescaling (x, s, f) of a slice point to the original problem");

  m.def(
      "lewis_weights",
      [](const std::vector<Matrix>& factors, double p, double eps) {
        auto result = quartsolve::compute_weights(to_factors(factors), p, eps);
        return py::make_tuple(result.tau.tau, result.iterations);
      },
      py::arg("factors"), py::arg("p") = 1.5, py::arg("eps") = 1e-6,
      "Fixed-point weights of order p and the sweep count");

  m.def(
      "leverage_scores",
      [](const std::vector<Matrix>& factors, const Vector& tau) {
        return quartsolve::leverage_scores(to_factors(factors),
                                           quartsolve::WeightVector(tau));
      },
      py::arg("factors"), py::arg("tau"));

  m.def(
      "coherence",
      [](const std::vector<Matrix>& factors) {
        return quartsolve::coherence(to_factors(factors));
      },
      py::arg("factors"), "Largest leverage score at uniform weights");

  m.def(
      "optimal_preconditioner",
      [](const std::vector<Matrix>& factors, double omega, double eps) {
        auto result =
            quartsolve::optimal_preconditioner_p2(to_factors(factors), omega, eps);
        py::dict out;
        out["b_hat"] = result.b_hat.dense();
        out["scale"] = result.scale;
        out["p_prime"] = result.p_prime;
        out["upper_factor"] = result.upper_factor;
        out["used_fallback"] = result.used_fallback;
        out["iterations"] = result.iterations;
        return out;
      },
      py::arg("factors"), py::arg("omega") = 2.0, py::arg("eps") = 1e-3,
      "Certified quadratic-norm preconditioner via the surrogate power");

  m.def(
      "solve_qip",
      [](const std::vector<Matrix>& factors, const Vector& d, const Vector& x0,
         const std::string& cone, long outer_iters, double inner_rel_accuracy,
         long inner_max_oracle_calls) {
        quartsolve::QipInstance qip(to_factors(factors), d, parse_cone(cone));
        quartsolve::DcConfig config;
        config.inner_rel_accuracy = inner_rel_accuracy;
        config.inner_max_oracle_calls = inner_max_oracle_calls;
        auto result = quartsolve::dc_solve(qip, config, x0, outer_iters);
        py::dict out;
        out["x"] = result.x;
        out["f"] = quartsolve::eval_F(qip, result.x);
        out["outer_trace"] = trace_to_dict(result.outer_trace);
        out["inner_oracle_calls"] = result.total_inner_oracle_calls;
        out["stop"] = result.stop == quartsolve::DcStopReason::Converged ? "converged"
                      : result.stop == quartsolve::DcStopReason::OuterLimit
                          ? "outer_limit"
                          : "degenerate_linear_term";
        return out;
      },
      py::arg("factors"), py::arg("d"), py::arg("x0"), py::arg("cone") = "full",
      py::arg("outer_iters") = 200, py::arg("inner_rel_accuracy") = 1e-4,
      py::arg("inner_max_oracle_calls") = 20000,
      "Alternating linearization for targets d_i = <x, B_i x>");

  m.def(
      "gen_synthetic",
      [](int m, int n, double sigma_min, std::uint64_t seed) {
        auto inst = quartsolve::gen_synthetic(m, n, sigma_min, seed);
        std::vector<Matrix> factors;
        for (const auto& f : inst.form.factors()) factors.push_back(f.U);
        return py::make_tuple(factors, inst.linear_term);
      },
      py::arg("m"), py::arg("n"), py::arg("sigma_min"), py::arg("seed"),
      "Rank-one factor rows with prescribed spectrum plus a unit linear term");

  m.def(
      "gen_phase_retrieval",
      [](int n_signal, int m, std::uint64_t seed) {
        auto inst = quartsolve::gen_phase_retrieval(n_signal, m, seed);
        std::vector<Matrix> factors;
        for (const auto& f : inst.qip.factors) factors.push_back(f.U);
        return py::make_tuple(factors, inst.qip.d, inst.x_star);
      },
      py::arg("n_signal"), py::arg("m"), py::arg("seed"),
      "Real-embedded phaseless measurements of a planted complex signal");
}
