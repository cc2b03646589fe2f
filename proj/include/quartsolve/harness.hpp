#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "quartsolve/problems.hpp"

namespace quartsolve {

/// Merged experiment configuration.  Values may arrive from a flat JSON
/// config file, from CLI flags (which win), or fall back to per-experiment
/// desk-scale defaults when left unset.
struct HarnessOptions {
  std::string experiment;  // fig1 | fig2 | lewis_demo | dc_demo | custom
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;

  /// CSVs carry zeros in the time column unless wall times are requested;
  /// measured times would break byte-identical reruns.
  bool wall_times = false;

  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> sigma_min;
  std::optional<double> sigma_ratio;
  std::optional<long> max_oracle_calls;
  std::optional<double> target_rel_accuracy;
  std::optional<int> n_signal;
  std::optional<int> n_points;
  std::optional<int> rank;
  std::optional<double> edge_density;
  std::optional<double> omega;
  std::optional<double> eps;
  std::optional<int> samples;
};

/// Parse a flat JSON object of scalars.  Unknown keys and mistyped values
/// raise ConfigError naming the key.  Mandatory keys may be absent here
/// (CLI flags can still supply them); validate_required enforces presence
/// after the merge.
HarnessOptions parse_harness_config(const std::string& json_text);
HarnessOptions load_harness_config(const std::string& path);

/// Throws ConfigError listing every missing mandatory key
/// (experiment, seed, out_dir).
void validate_required(const HarnessOptions& opts);

/// Runs one experiment, writing one CSV per (solver, preconditioner) curve
/// with columns  stage,iter,oracle_calls,f_value,sqrt_rho,rel_gap,time_ms
/// plus summary.csv.  Deterministic for a fixed seed.  Returns 0 on success.
int run_experiment(const HarnessOptions& opts);
int run_experiment_file(const std::string& config_path);

/// Condition-number estimates of one factor tuple under the identity norm,
/// the uniform-weight operator, and the fixed-point optimum, with the
/// measured coherence and the √n ≤ √(mγ) ≤ √(mr) chain.
struct PrecondReport {
  double kappa_identity = 0.0;
  double kappa_uniform = 0.0;   // √(m·γ)
  double kappa_optimal = 0.0;   // certified e^{2ε}·(upper factor)
  double gamma = 0.0;
  double sqrt_n = 0.0;
  double sqrt_m_gamma = 0.0;
  double sqrt_m_r = 0.0;
  bool chain_ok = false;
  double p_prime = 0.0;
  bool used_fallback = false;
};

PrecondReport compare_preconditioners(const QuarticForm& form, double omega = 2.0,
                                      double eps = 1e-3);

}  // namespace quartsolve
