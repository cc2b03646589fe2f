#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "quartsolve/errors.hpp"
#include "quartsolve/harness.hpp"

namespace {

/// CLI flags override config-file keys; whatever survives the merge is
/// validated centrally by the harness.
struct CliOverrides {
  std::string config_path;
  std::string experiment;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
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

template <typename T>
void merge(std::optional<T>& target, const std::optional<T>& from_cli) {
  if (from_cli) {
    target = from_cli;
  }
}

int run_with(const CliOverrides& cli) {
  quartsolve::HarnessOptions opts;
  if (!cli.config_path.empty()) {
    opts = quartsolve::load_harness_config(cli.config_path);
  }
  if (!cli.experiment.empty()) {
    opts.experiment = cli.experiment;
  }
  if (!cli.out_dir.empty()) {
    opts.out_dir = cli.out_dir;
  }
  merge(opts.seed, cli.seed);
  if (cli.full_scale) {
    opts.full_scale = true;
  }
  if (cli.wall_times) {
    opts.wall_times = true;
  }
  merge(opts.m, cli.m);
  merge(opts.n, cli.n);
  merge(opts.sigma_min, cli.sigma_min);
  merge(opts.sigma_ratio, cli.sigma_ratio);
  merge(opts.max_oracle_calls, cli.max_oracle_calls);
  merge(opts.target_rel_accuracy, cli.target_rel_accuracy);
  merge(opts.n_signal, cli.n_signal);
  merge(opts.n_points, cli.n_points);
  merge(opts.rank, cli.rank);
  merge(opts.edge_density, cli.edge_density);
  merge(opts.omega, cli.omega);
  merge(opts.eps, cli.eps);
  merge(opts.samples, cli.samples);
  return quartsolve::run_experiment(opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quartsolve: homogenized solvers for convex quartic minimization"};
  app.require_subcommand(1);

  CliOverrides cli;
  CLI::App* run = app.add_subcommand("run", "run an experiment and write CSV traces");
  run->add_option("--experiment", cli.experiment,
                  "experiment kind: fig1, fig2, lewis_demo, dc_demo, custom");
  run->add_option("--seed", cli.seed, "random seed (controls all generated data)");
  run->add_option("--out-dir", cli.out_dir, "directory receiving the CSV files");
  run->add_option("--config", cli.config_path, "flat JSON config file; flags override it");
  run->add_flag("--full-scale", cli.full_scale, "original experiment sizes instead of desk scale");
  run->add_flag("--wall-times", cli.wall_times,
                "emit measured times in the time_ms column (breaks byte-identical reruns)");
  run->add_option("--m", cli.m, "measurement count");
  run->add_option("--n", cli.n, "ambient dimension");
  run->add_option("--sigma-min", cli.sigma_min, "smallest singular value");
  run->add_option("--sigma-ratio", cli.sigma_ratio, "largest-to-smallest singular value ratio");
  run->add_option("--max-oracle-calls", cli.max_oracle_calls, "per-solver gradient budget");
  run->add_option("--target-rel-accuracy", cli.target_rel_accuracy, "solver stopping accuracy");
  run->add_option("--n-signal", cli.n_signal, "phase retrieval signal length");
  run->add_option("--n-points", cli.n_points, "distance-completion point count");
  run->add_option("--rank", cli.rank, "embedding dimension r");
  run->add_option("--edge-density", cli.edge_density, "distance-completion edge probability");
  run->add_option("--omega", cli.omega, "surrogate-power slack factor");
  run->add_option("--eps", cli.eps, "fixed-point precision");
  run->add_option("--samples", cli.samples, "Monte-Carlo sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    return run_with(cli);
  } catch (const quartsolve::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "unexpected error: " << err.what() << "\n";
    return 3;
  }
}
