#include "lmcma/harness/aggregate.hpp"
#include "lmcma/harness/config.hpp"
#include "lmcma/harness/experiment.hpp"
#include "lmcma/harness/timing.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace lmcma;
using namespace lmcma::harness;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct OptimizeFlags {
  std::string config_file;
  std::string algo, fn, seeds, out, rule;
  std::optional<std::size_t> n, max_evals, m, nsteps, record_every, jobs, checkpoint_every;
  std::optional<double> target, max_seconds, c1, csigma, dsigma, zstar, sigma0, init_range;
  std::optional<std::uint64_t> rotation_seed;
  bool resume = false;
  bool dump_rotation = false;
};

ExperimentConfig build_config(const OptimizeFlags& f) {
  ExperimentConfig config;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw std::invalid_argument("cannot read config file " + f.config_file);
    apply_json(config, nlohmann::json::parse(in));
  }
  if (!f.algo.empty()) {
    const auto a = parse_algorithm(f.algo);
    if (!a) throw std::invalid_argument("unknown algorithm '" + f.algo + "'");
    config.algorithm = *a;
  }
  if (!f.fn.empty()) {
    const auto p = problems::parse_function(f.fn);
    if (!p) throw std::invalid_argument("unknown function '" + f.fn + "'");
    config.function = *p;
  }
  if (f.n) config.n = *f.n;
  if (!f.seeds.empty()) config.seeds = parse_seeds(f.seeds);
  if (f.target) config.target_fitness = *f.target;
  if (f.max_evals) config.max_evaluations = *f.max_evals;
  if (f.max_seconds) config.max_seconds = *f.max_seconds;
  if (f.sigma0) config.sigma0 = *f.sigma0;
  if (f.init_range) config.init_range = *f.init_range;
  if (f.rotation_seed) config.rotation_seed = *f.rotation_seed;
  if (!f.out.empty()) config.output_dir = f.out;
  if (f.record_every) config.record_every = *f.record_every;
  if (f.jobs) config.jobs = *f.jobs;
  if (f.checkpoint_every) config.checkpoint_every = *f.checkpoint_every;
  if (f.resume) config.resume = true;
  if (f.dump_rotation) config.dump_rotation = true;
  auto& ov = config.overrides;
  if (f.m) ov.m = *f.m;
  if (f.nsteps) ov.n_steps = *f.nsteps;
  if (f.c1) ov.c_1 = *f.c1;
  if (f.csigma) ov.c_sigma = *f.csigma;
  if (f.dsigma) ov.d_sigma = *f.dsigma;
  if (f.zstar) ov.z_star = *f.zstar;
  if (!f.rule.empty()) {
    if (f.rule == "psr") {
      ov.rule = SuccessRule::Population;
    } else if (f.rule == "msr") {
      ov.rule = SuccessRule::Median;
    } else {
      throw std::invalid_argument("unknown success rule '" + f.rule + "'");
    }
  }
  config.validate();
  return config;
}

int run_optimize(const OptimizeFlags& flags) {
  ExperimentConfig config;
  try {
    config = build_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "optimize: " << e.what() << '\n';
    return kExitUsage;
  }
  const ExperimentSummary summary = run_experiment(config);
  for (const auto& r : summary.results) {
    std::cout << "seed " << r.seed << ": " << to_string(r.status) << ", evaluations " << r.evaluations << ", best "
              << r.final_best << '\n';
  }
  const auto median = summary.median_evals();
  std::cout << summary.successes() << "/" << summary.results.size() << " reached target";
  if (median) std::cout << ", median evals " << *median;
  std::cout << '\n';
  if (config.output_dir.empty()) write_summary_csv(std::cout, summary);
  return summary.all_reached() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for LM-CMA-ES and its baselines"};
  app.require_subcommand(1);

  OptimizeFlags of;
  auto* optimize = app.add_subcommand("optimize", "Run one experiment over a list of seeds");
  optimize->add_option("--config", of.config_file, "JSON config file; flags override its values");
  optimize->add_option("--algo", of.algo, "lmcma, cholesky or sepcma");
  optimize->add_option("--fn", of.fn, "sphere, elli, ellirot or rosen");
  optimize->add_option("--n", of.n, "Dimension");
  optimize->add_option("--seeds", of.seeds, "Seeds as a..b, a,b,c or a single value");
  optimize->add_option("--target", of.target, "Target fitness");
  optimize->add_option("--max-evals", of.max_evals, "Evaluation budget per seed");
  optimize->add_option("--max-seconds", of.max_seconds, "Wall-clock budget per seed");
  optimize->add_option("--out", of.out, "Output directory");
  optimize->add_option("--m", of.m, "Number of stored direction vectors");
  optimize->add_option("--nsteps", of.nsteps, "Target gap between stored vectors");
  optimize->add_option("--c1", of.c1, "Learning rate for the factor");
  optimize->add_option("--csigma", of.csigma, "Success rule smoothing");
  optimize->add_option("--dsigma", of.dsigma, "Success rule damping");
  optimize->add_option("--zstar", of.zstar, "Target success ratio");
  optimize->add_option("--rule", of.rule, "psr or msr");
  optimize->add_option("--sigma0", of.sigma0, "Initial step size");
  optimize->add_option("--init-range", of.init_range, "Initial mean drawn from [-r, r]^n");
  optimize->add_option("--rotation-seed", of.rotation_seed, "Seed of the rotation matrix");
  optimize->add_option("--record-every", of.record_every, "Trace record cadence in generations");
  optimize->add_option("--jobs", of.jobs, "Parallel workers (0: hardware threads)");
  optimize->add_option("--checkpoint-every", of.checkpoint_every, "Checkpoint cadence in generations (lmcma)");
  optimize->add_flag("--resume", of.resume, "Resume seeds from checkpoints in the output directory");
  optimize->add_flag("--dump-rotation", of.dump_rotation, "Write the rotation matrix next to the traces");

  std::string algos = "lmcma,cholesky,sepcma";
  std::string dims;
  TimingOptions to;
  std::size_t cholesky_evals = *to.cholesky_evaluations;
  std::string timing_out;
  auto* timing = app.add_subcommand("timing", "Measure optimizer-internal seconds per evaluation");
  timing->add_option("--algos", algos, "Comma-separated algorithms");
  timing->add_option("--dims", dims, "Comma-separated ascending dimensions")->required();
  timing->add_option("--evals", to.evaluations, "Evaluations per point");
  timing->add_option("--cholesky-evals", cholesky_evals, "Evaluation cap for cholesky points (0: no cap)");
  timing->add_option("--seed", to.seed, "Seed");
  timing->add_option("--out", timing_out, "Output CSV (default stdout)");

  std::vector<std::string> summaries;
  std::string aggregate_out;
  auto* agg = app.add_subcommand("aggregate", "Combine summary CSVs into an evals-vs-n table");
  agg->add_option("--out", aggregate_out, "Output CSV (default stdout)");
  agg->add_option("summaries", summaries, "Summary CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*optimize) return run_optimize(of);

    if (*timing) {
      to.algorithms.clear();
      for (const auto& name : split_list(algos)) {
        const auto a = parse_algorithm(name);
        if (!a) throw std::invalid_argument("unknown algorithm '" + name + "'");
        to.algorithms.push_back(*a);
      }
      for (const auto& d : split_list(dims)) to.dims.push_back(std::stoul(d));
      to.cholesky_evaluations = cholesky_evals ? std::optional<std::size_t>(cholesky_evals) : std::nullopt;
      const auto rows = run_timing(to);
      if (timing_out.empty()) {
        write_timing_csv(std::cout, rows);
      } else {
        std::ofstream out(timing_out);
        write_timing_csv(out, rows);
      }
      return kExitOk;
    }

    if (*agg) {
      std::vector<std::filesystem::path> paths(summaries.begin(), summaries.end());
      const auto rows = aggregate(paths);
      if (aggregate_out.empty()) {
        write_aggregate_csv(std::cout, rows);
      } else {
        std::ofstream out(aggregate_out);
        write_aggregate_csv(out, rows);
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
