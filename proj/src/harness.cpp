#include "quartsolve/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "quartsolve/lewis.hpp"
#include "quartsolve/serialize.hpp"

namespace quartsolve {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const char* why) {
  std::ostringstream os;
  os << "config key '" << key << "': " << why;
  throw ConfigError(os.str());
}

template <typename T>
void read_int_key(const json& value, const std::string& key, std::optional<T>& slot) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    bad_key(key, "expected an integer");
  }
  slot = value.get<T>();
}

void read_double_key(const json& value, const std::string& key, std::optional<double>& slot) {
  if (!value.is_number()) {
    bad_key(key, "expected a number");
  }
  slot = value.get<double>();
}

/// One convergence curve plus everything needed to file it.
struct Curve {
  std::string name;
  Trace trace;
};

double rel_gap(double f, double f_star) {
  return (f - f_star) / std::max(std::abs(f_star), 1e-300);
}

long calls_to_gap(const Trace& trace, double f_star, double gap) {
  for (const auto& rec : trace.records) {
    if (rel_gap(rec.f_value, f_star) <= gap) {
      return rec.oracle_calls;
    }
  }
  return -1;
}

/// gap_scale overrides the rel_gap denominator.  The default (0) divides by
/// |f_star|, which is meaningless for demos whose target value is exactly
/// zero; those pass the starting objective instead.
void write_trace_csv(const fs::path& path, const Trace& trace, double f_star,
                     bool wall_times, double gap_scale = 0.0) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open trace file '" + path.string() + "'");
  }
  const double denom =
      std::max(gap_scale > 0.0 ? gap_scale : std::abs(f_star), 1e-300);
  out << "stage,iter,oracle_calls,f_value,sqrt_rho,rel_gap,time_ms\n";
  for (const auto& rec : trace.records) {
    out << rec.stage << "," << rec.iter << "," << rec.oracle_calls << ","
        << format_number(rec.f_value) << "," << format_number(rec.sqrt_rho) << ","
        << format_number((rec.f_value - f_star) / denom) << ","
        << (wall_times ? format_number(rec.time_ms) : "0") << "\n";
  }
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

void write_summary_csv(const fs::path& path, const std::vector<Curve>& curves,
                       double f_star_ref, double f_star_best) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open summary file '" + path.string() + "'");
  }
  out << "curve,target_gap,calls_vs_reference,calls_vs_best\n";
  const double targets[] = {1e-2, 1e-4, 1e-6};
  for (const auto& curve : curves) {
    for (double target : targets) {
      out << curve.name << "," << format_number(target) << ","
          << calls_to_gap(curve.trace, f_star_ref, target) << ","
          << calls_to_gap(curve.trace, f_star_best, target) << "\n";
    }
  }
}

SolverConfig make_config(const HarnessOptions& opts, double beta, long default_budget) {
  SolverConfig config;
  config.beta = beta;
  config.max_oracle_calls = opts.max_oracle_calls.value_or(default_budget);
  config.target_rel_accuracy = opts.target_rel_accuracy.value_or(1e-10);
  config.seed = opts.seed.value_or(0);
  return config;
}

/// Best objective value across a curve (traces of the accelerated method are
/// not monotone, so the minimum matters, not the tail).
double curve_best(const Curve& curve) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : curve.trace.records) {
    best = std::min(best, rec.f_value);
  }
  return best;
}

/// Four-method comparison on one synthetic instance under the identity norm;
/// shared by fig1 and the custom experiment.
void run_method_comparison(const HarnessOptions& opts, const SyntheticInstance& inst,
                           const std::string& tag, const fs::path& out_dir,
                           long default_budget) {
  const int dim = inst.form.dim();
  Preconditioner norm = Preconditioner::identity(dim);
  const QuarticBounds bounds = bounds_from_structure(inst.form, norm);
  FeasibleSet set(Cone{}, inst.linear_term, std::move(norm));
  const Vector y0 = set.initial_point();
  SolverConfig config = make_config(opts, std::sqrt(bounds.beta2), default_budget);

  std::vector<Curve> curves;
  curves.push_back({tag + "_homgd", solve_homgd(inst.form, set, config, y0).trace});
  curves.push_back({tag + "_agd_restart", solve_agd_restart(inst.form, set, config, y0).trace});
  curves.push_back({tag + "_agd", solve_agd_traced(inst.form, set, config, y0).trace});
  {
    const Vector c = inst.linear_term;
    const QuarticForm& form = inst.form;
    auto f_eval = [&form, &c](const Vector& x) { return form.eval_rho(x) - c.dot(x); };
    auto f_grad = [&form, &c](const Vector& x) { return Vector(form.grad_rho(x) - c); };
    auto aux = [&form](const Vector& x) { return form.eval_sqrt_rho(x); };
    Vector x0 = scale_back(inst.form, inst.linear_term, y0).x;
    curves.push_back(
        {tag + "_gd_armijo", solve_gd_armijo(f_eval, f_grad, Cone{}, x0, config, aux).trace});
  }

  // Reference run: the restarted method with a larger budget and a tight
  // stop, then take the best value any curve ever saw.
  SolverConfig ref_config = config;
  ref_config.max_oracle_calls = 3 * config.max_oracle_calls;
  ref_config.target_rel_accuracy = 1e-13;
  Curve reference{tag + "_reference", solve_agd_restart(inst.form, set, ref_config, y0).trace};
  double f_star_ref = curve_best(reference);
  double f_star_best = f_star_ref;
  for (const auto& curve : curves) {
    f_star_best = std::min(f_star_best, curve_best(curve));
  }
  f_star_ref = std::min(f_star_ref, f_star_best);

  for (const auto& curve : curves) {
    write_trace_csv(out_dir / (curve.name + ".csv"), curve.trace, f_star_ref,
                    opts.wall_times);
  }
  write_summary_csv(out_dir / (tag + "_summary.csv"), curves, f_star_ref, f_star_best);
}

int run_fig1(const HarnessOptions& opts, const fs::path& out_dir) {
  const int m = opts.m.value_or(opts.full_scale ? 2000 : 400);
  const int n = opts.n.value_or(opts.full_scale ? 1000 : 200);
  const double ratios[] = {5.0, 50.0};
  const std::uint64_t seed = *opts.seed;
  for (size_t idx = 0; idx < 2; ++idx) {
    const double ratio = opts.sigma_ratio.value_or(ratios[idx]);
    SyntheticInstance inst = gen_synthetic(m, n, 1.0 / ratio, seed + idx);
    std::ostringstream tag;
    tag << "fig1_ratio" << static_cast<long>(ratio);
    run_method_comparison(opts, inst, tag.str(), out_dir, 30000);
    if (opts.sigma_ratio) {
      break;  // an explicit ratio runs once
    }
  }
  return 0;
}

int run_fig2(const HarnessOptions& opts, const fs::path& out_dir) {
  const int m = opts.m.value_or(500);
  const int n = opts.n.value_or(20);
  const double ratio = opts.sigma_ratio.value_or(100.0);
  const double omega = opts.omega.value_or(2.0);
  const double eps = opts.eps.value_or(1e-3);
  const std::uint64_t seed = *opts.seed;
  const CoherenceTarget targets[] = {CoherenceTarget::Low, CoherenceTarget::High};
  const char* target_names[] = {"low", "high"};
  for (int t = 0; t < 2; ++t) {
    SyntheticInstance inst = gen_coherent(m, n, targets[t], ratio, seed + t);
    const auto& factors = inst.form.factors();
    const double gamma = inst.gamma;

    // Identity norm with its spectral certificate.
    Preconditioner norm_id = Preconditioner::identity(n);
    const QuarticBounds bounds_id = bounds_from_structure(inst.form, norm_id);

    // Uniform-weight operator B⁰ = m^{−1/2}·ΣBᵢ with the coherence
    // certificate (α, β) = (1, √(mγ)).
    SpdOperator b0 = sum_weighted(
        factors, Vector::Constant(static_cast<Eigen::Index>(factors.size()),
                                  1.0 / std::sqrt(static_cast<double>(m))));
    // Fixed-point optimum with its sandwich certificate.
    PreconditionerP2Result opt = optimal_preconditioner_p2(factors, omega, eps);

    struct NormChoice {
      std::string name;
      Preconditioner norm;
      double beta;
    };
    std::vector<NormChoice> choices;
    choices.push_back({"id", std::move(norm_id), std::sqrt(bounds_id.beta2)});
    choices.push_back({"b0", Preconditioner::general(std::move(b0)),
                       std::sqrt(static_cast<double>(m) * gamma)});
    choices.push_back({"bstar", Preconditioner::general(std::move(opt.b_hat)),
                       std::exp(eps) * opt.upper_factor * opt.scale});

    std::vector<Curve> curves;
    std::optional<Curve> reference;
    for (auto& choice : choices) {
      FeasibleSet set(Cone{}, inst.linear_term, choice.norm);
      const Vector y0 = set.initial_point();
      SolverConfig config = make_config(opts, choice.beta, 40000);
      curves.push_back({std::string("fig2_") + target_names[t] + "_homgd_" + choice.name,
                        solve_homgd(inst.form, set, config, y0).trace});
      if (choice.name == "bstar") {
        SolverConfig ref_config = config;
        ref_config.max_oracle_calls = 2 * config.max_oracle_calls;
        ref_config.target_rel_accuracy = 1e-13;
        reference = Curve{"ref", solve_agd_restart(inst.form, set, ref_config, y0).trace};
      }
    }
    double f_star_ref = curve_best(*reference);
    double f_star_best = f_star_ref;
    for (const auto& curve : curves) {
      f_star_best = std::min(f_star_best, curve_best(curve));
    }
    f_star_ref = std::min(f_star_ref, f_star_best);
    for (const auto& curve : curves) {
      write_trace_csv(out_dir / (curve.name + ".csv"), curve.trace, f_star_ref,
                      opts.wall_times);
    }
    write_summary_csv(out_dir / (std::string("fig2_") + target_names[t] + "_summary.csv"),
                      curves, f_star_ref, f_star_best);

    PrecondReport report = compare_preconditioners(inst.form, omega, eps);
    std::ofstream rep(out_dir / (std::string("fig2_") + target_names[t] + "_report.csv"));
    if (!rep) {
      throw IoError("cannot open preconditioner report file");
    }
    rep << "key,value\n";
    rep << "kappa_identity," << format_number(report.kappa_identity) << "\n";
    rep << "kappa_uniform," << format_number(report.kappa_uniform) << "\n";
    rep << "kappa_optimal," << format_number(report.kappa_optimal) << "\n";
    rep << "gamma," << format_number(report.gamma) << "\n";
    rep << "p_prime," << format_number(report.p_prime) << "\n";
    rep << "chain_ok," << (report.chain_ok ? 1 : 0) << "\n";
  }
  return 0;
}

int run_lewis_demo(const HarnessOptions& opts, const fs::path& out_dir) {
  const int m = opts.m.value_or(100);
  const int n = opts.n.value_or(10);
  const double ratio = opts.sigma_ratio.value_or(10.0);
  const double eps = opts.eps.value_or(1e-6);
  SyntheticInstance inst = gen_coherent(m, n, CoherenceTarget::High, ratio, *opts.seed);
  const auto& factors = inst.form.factors();

  // Per-sweep fixed-point log at p = 1.5 from the uniform start.
  const double p = 1.5;
  const PNorm pnorm(p);
  WeightVector tau(Vector::Constant(m, std::pow(static_cast<double>(m), 1.0 / p - 1.0)));
  std::ofstream log(out_dir / "lewis_fixed_point.csv");
  if (!log) {
    throw IoError("cannot open lewis_fixed_point.csv");
  }
  log << "iter,log_change,q_norm,sum_leverage\n";
  const double stop = (2.0 - p) / (p - 1.0) * eps;
  for (long k = 1; k <= 200; ++k) {
    WeightVector next = fixed_point_map(factors, tau, pnorm);
    const double change = log_inf_distance(next.tau, tau.tau).value;
    tau = std::move(next);
    const double q_norm = std::pow(tau.tau.array().pow(pnorm.q).sum(), 1.0 / pnorm.q);
    log << k << "," << format_number(change) << "," << format_number(q_norm) << ","
        << format_number(leverage_scores(factors, tau).sum()) << "\n";
    if (change <= stop) {
      break;
    }
  }

  PrecondReport report = compare_preconditioners(inst.form, opts.omega.value_or(2.0),
                                                 opts.eps.value_or(1e-3));
  std::ofstream rep(out_dir / "precond_report.csv");
  if (!rep) {
    throw IoError("cannot open precond_report.csv");
  }
  rep << "key,value\n";
  rep << "gamma," << format_number(report.gamma) << "\n";
  rep << "kappa_identity," << format_number(report.kappa_identity) << "\n";
  rep << "kappa_uniform," << format_number(report.kappa_uniform) << "\n";
  rep << "kappa_optimal," << format_number(report.kappa_optimal) << "\n";
  rep << "sqrt_n," << format_number(report.sqrt_n) << "\n";
  rep << "sqrt_m_gamma," << format_number(report.sqrt_m_gamma) << "\n";
  rep << "sqrt_m_r," << format_number(report.sqrt_m_r) << "\n";
  rep << "p_prime," << format_number(report.p_prime) << "\n";
  rep << "used_fallback," << (report.used_fallback ? 1 : 0) << "\n";
  rep << "chain_ok," << (report.chain_ok ? 1 : 0) << "\n";
  return 0;
}

int run_dc_demo(const HarnessOptions& opts, const fs::path& out_dir) {
  const std::uint64_t seed = *opts.seed;
  DcConfig dc_config;
  dc_config.inner_max_oracle_calls = opts.max_oracle_calls.value_or(20000);

  {
    PhaseRetrievalInstance pr =
        gen_phase_retrieval(opts.n_signal.value_or(8), opts.m.value_or(48), seed);
    // Deterministic spectral-flavored start: leading eigvector of Σ dᵢBᵢ.
    SpdOperator weighted = sum_weighted(pr.qip.factors, pr.qip.d.cwiseMax(1e-12));
    Eigen::SelfAdjointEigenSolver<Matrix> es(weighted.dense());
    Vector x0 = es.eigenvectors().col(pr.qip.dim() - 1);
    const double d_mean = pr.qip.d.mean();
    x0 *= std::sqrt(std::sqrt(std::max(d_mean, 1e-12)));
    DcResult result = dc_solve(pr.qip, dc_config, x0, 400);
    const double f0 = result.outer_trace.records.front().f_value;
    write_trace_csv(out_dir / "dc_demo_phase.csv", result.outer_trace, 0.0,
                    opts.wall_times, f0);
    std::ofstream meta(out_dir / "dc_demo_phase_meta.csv");
    meta << "key,value\n";
    meta << "f0," << format_number(f0) << "\n";
    meta << "f_final," << format_number(result.outer_trace.records.back().f_value) << "\n";
    meta << "outer_iters," << (result.outer_trace.records.size() - 1) << "\n";
    meta << "inner_oracle_calls," << result.total_inner_oracle_calls << "\n";
  }
  {
    DmcInstance dmc = gen_dmc(opts.n_points.value_or(12), opts.rank.value_or(2),
                              opts.edge_density.value_or(0.8), seed);
    // Metric-completion start: deterministic, and random centered starts
    // routinely converge to spurious stationary configurations.  The outer
    // budget is generous because the edge-difference factors make the inner
    // subproblems ill conditioned; typical runs converge well before it.
    Vector x0 = dmc_mds_start(dmc);
    DcResult result = dc_solve(dmc.qip, dc_config, x0, 3000);
    const double f0 = result.outer_trace.records.front().f_value;
    write_trace_csv(out_dir / "dc_demo_dmc.csv", result.outer_trace, 0.0,
                    opts.wall_times, f0);
    std::ofstream meta(out_dir / "dc_demo_dmc_meta.csv");
    meta << "key,value\n";
    meta << "f0," << format_number(f0) << "\n";
    meta << "f_final," << format_number(result.outer_trace.records.back().f_value) << "\n";
    meta << "outer_iters," << (result.outer_trace.records.size() - 1) << "\n";
    meta << "inner_oracle_calls," << result.total_inner_oracle_calls << "\n";
    meta << "lambda1," << format_number(dmc.laplacian_lambda1) << "\n";
    meta << "max_degree," << dmc.max_degree << "\n";
    meta << "gamma_graph," << format_number(dmc.gamma_graph) << "\n";
  }
  return 0;
}

int run_custom(const HarnessOptions& opts, const fs::path& out_dir) {
  const int m = opts.m.value_or(50);
  const int n = opts.n.value_or(10);
  const double sigma_min = opts.sigma_min.value_or(0.2);
  SyntheticInstance inst = gen_synthetic(m, n, sigma_min, *opts.seed);
  run_method_comparison(opts, inst, "custom", out_dir, 20000);
  return 0;
}

}  // namespace

HarnessOptions parse_harness_config(const std::string& json_text) {
  json parsed;
  try {
    parsed = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!parsed.is_object()) {
    throw ConfigError("config must be a flat JSON object");
  }
  HarnessOptions opts;
  for (const auto& [key, value] : parsed.items()) {
    if (key == "experiment") {
      if (!value.is_string()) bad_key(key, "expected a string");
      opts.experiment = value.get<std::string>();
    } else if (key == "out_dir") {
      if (!value.is_string()) bad_key(key, "expected a string");
      opts.out_dir = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        bad_key(key, "expected a nonnegative integer");
      }
      opts.seed = value.get<std::uint64_t>();
    } else if (key == "full_scale") {
      if (!value.is_boolean()) bad_key(key, "expected a boolean");
      opts.full_scale = value.get<bool>();
    } else if (key == "wall_times") {
      if (!value.is_boolean()) bad_key(key, "expected a boolean");
      opts.wall_times = value.get<bool>();
    } else if (key == "m") {
      read_int_key(value, key, opts.m);
    } else if (key == "n") {
      read_int_key(value, key, opts.n);
    } else if (key == "n_signal") {
      read_int_key(value, key, opts.n_signal);
    } else if (key == "n_points") {
      read_int_key(value, key, opts.n_points);
    } else if (key == "rank") {
      read_int_key(value, key, opts.rank);
    } else if (key == "samples") {
      read_int_key(value, key, opts.samples);
    } else if (key == "max_oracle_calls") {
      read_int_key(value, key, opts.max_oracle_calls);
    } else if (key == "sigma_min") {
      read_double_key(value, key, opts.sigma_min);
    } else if (key == "sigma_ratio") {
      read_double_key(value, key, opts.sigma_ratio);
    } else if (key == "target_rel_accuracy") {
      read_double_key(value, key, opts.target_rel_accuracy);
    } else if (key == "edge_density") {
      read_double_key(value, key, opts.edge_density);
    } else if (key == "omega") {
      read_double_key(value, key, opts.omega);
    } else if (key == "eps") {
      read_double_key(value, key, opts.eps);
    } else {
      bad_key(key, "unknown key");
    }
  }
  return opts;
}

HarnessOptions load_harness_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_harness_config(buffer.str());
}

void validate_required(const HarnessOptions& opts) {
  std::vector<std::string> missing;
  if (opts.experiment.empty()) {
    missing.push_back("experiment");
  }
  if (!opts.seed) {
    missing.push_back("seed");
  }
  if (opts.out_dir.empty()) {
    missing.push_back("out_dir");
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "missing required config keys:";
    for (const auto& key : missing) {
      os << " " << key;
    }
    throw ConfigError(os.str());
  }
  static const char* known[] = {"fig1", "fig2", "lewis_demo", "dc_demo", "custom"};
  if (std::find(std::begin(known), std::end(known), opts.experiment) == std::end(known)) {
    throw ConfigError("unknown experiment '" + opts.experiment +
                      "' (expected fig1, fig2, lewis_demo, dc_demo or custom)");
  }
}

int run_experiment(const HarnessOptions& opts) {
  validate_required(opts);
  fs::path out_dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + opts.out_dir + "': " + ec.message());
  }
  if (opts.experiment == "fig1") {
    return run_fig1(opts, out_dir);
  }
  if (opts.experiment == "fig2") {
    return run_fig2(opts, out_dir);
  }
  if (opts.experiment == "lewis_demo") {
    return run_lewis_demo(opts, out_dir);
  }
  if (opts.experiment == "dc_demo") {
    return run_dc_demo(opts, out_dir);
  }
  return run_custom(opts, out_dir);
}

int run_experiment_file(const std::string& config_path) {
  HarnessOptions opts = load_harness_config(config_path);
  return run_experiment(opts);
}

PrecondReport compare_preconditioners(const QuarticForm& form, double omega, double eps) {
  if (form.variant() != QuarticForm::Variant::SumOfSquares) {
    throw UnsupportedGeometry(
        "compare_preconditioners: needs the factor tuple of a SumOfSquares form");
  }
  const auto& factors = form.factors();
  const double m = static_cast<double>(factors.size());
  const double n = static_cast<double>(form.dim());
  int max_rank = 0;
  for (const auto& f : factors) {
    max_rank = std::max(max_rank, f.cols());
  }

  PrecondReport report;
  report.gamma = coherence(factors);
  const QuarticBounds ident = bounds_from_structure(form, Preconditioner::identity(form.dim()));
  report.kappa_identity = ident.kappa();
  report.kappa_uniform = std::sqrt(m * report.gamma);
  PreconditionerP2Result opt = optimal_preconditioner_p2(factors, omega, eps);
  report.kappa_optimal = std::exp(2.0 * eps) * opt.upper_factor;
  report.p_prime = opt.p_prime;
  report.used_fallback = opt.used_fallback;
  report.sqrt_n = std::sqrt(n);
  report.sqrt_m_gamma = std::sqrt(m * report.gamma);
  report.sqrt_m_r = std::sqrt(m * static_cast<double>(max_rank));
  const double slack = 1.0 + 1e-9;
  report.chain_ok = report.sqrt_n <= report.sqrt_m_gamma * slack &&
                    report.sqrt_m_gamma <= report.sqrt_m_r * slack &&
                    (report.used_fallback ||
                     report.kappa_optimal <= std::exp(2.0 * eps) * omega * report.sqrt_n * slack);
  return report;
}

}  // namespace quartsolve
