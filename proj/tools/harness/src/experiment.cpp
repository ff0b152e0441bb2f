#include "lmcma/harness/experiment.hpp"

#include "lmcma/driver.hpp"
#include "lmcma/harness/stats.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace lmcma::harness {

namespace fs = std::filesystem;

namespace {

std::string format_real(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

fs::path checkpoint_state_path(const ExperimentConfig& config, std::uint64_t seed) {
  return config.output_dir / ("checkpoint_" + config.stem() + "_seed" + std::to_string(seed) + ".state");
}

fs::path checkpoint_progress_path(const ExperimentConfig& config, std::uint64_t seed) {
  return config.output_dir / ("checkpoint_" + config.stem() + "_seed" + std::to_string(seed) + ".json");
}

template <typename Writer>
void write_atomically(const fs::path& path, Writer&& writer) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    writer(out);
  }
  fs::rename(tmp, path);
}

struct Resumed {
  std::unique_ptr<Optimizer> optimizer;
  RunProgress progress;
  std::vector<TraceRecord> earlier_records;
};

std::optional<Resumed> try_resume(const ExperimentConfig& config, std::uint64_t seed) {
  const fs::path state = checkpoint_state_path(config, seed);
  const fs::path progress = checkpoint_progress_path(config, seed);
  if (!fs::exists(state) || !fs::exists(progress)) return std::nullopt;

  Resumed r;
  std::ifstream state_in(state);
  r.optimizer = std::make_unique<LmCmaEs>(LmCmaEs::load(state_in));
  if (r.optimizer->dimension() != config.n) throw std::runtime_error("checkpoint dimension does not match config");
  std::ifstream progress_in(progress);
  const auto j = nlohmann::json::parse(progress_in);
  r.progress.evaluations = j.at("evaluations").get<std::size_t>();
  r.progress.best_fitness = j.at("best_fitness").get<double>();
  r.progress.elapsed_seconds = j.at("elapsed_seconds").get<double>();

  const fs::path trace = trace_path(config, seed);
  if (fs::exists(trace)) {
    std::ifstream trace_in(trace);
    for (const auto& record : read_trace_csv(trace_in)) {
      if (record.evaluations <= r.progress.evaluations) r.earlier_records.push_back(record);
    }
  }
  return r;
}

RunTrace run_seed_impl(const ExperimentConfig& config, std::uint64_t seed, const ObjectiveProblem& problem) {
  Termination termination;
  termination.target_fitness = config.target_fitness;
  termination.max_evaluations = config.max_evaluations;
  termination.max_seconds = config.max_seconds;

  std::unique_ptr<Optimizer> optimizer;
  RunOptions options;
  options.record_every = config.record_every;
  std::vector<TraceRecord> earlier;

  if (config.resume) {
    if (auto resumed = try_resume(config, seed)) {
      optimizer = std::move(resumed->optimizer);
      options.resume_from = resumed->progress;
      earlier = std::move(resumed->earlier_records);
    }
  }
  if (!optimizer) optimizer = make_optimizer(config, seed);

  if (config.checkpoint_every > 0) {
    options.on_generation = [&config, seed](const Optimizer& opt, const RunProgress& progress) {
      if (opt.iteration() % config.checkpoint_every != 0) return;
      const auto& es = dynamic_cast<const LmCmaEs&>(opt);
      write_atomically(checkpoint_state_path(config, seed), [&](std::ostream& os) { es.save(os); });
      write_atomically(checkpoint_progress_path(config, seed), [&](std::ostream& os) {
        os << nlohmann::json{{"evaluations", progress.evaluations},
                             {"best_fitness", progress.best_fitness},
                             {"elapsed_seconds", progress.elapsed_seconds},
                             {"iteration", opt.iteration()}}
                  .dump()
           << '\n';
      });
    };
  }

  RunTrace trace = run(*optimizer, problem, termination, options);
  if (!earlier.empty()) trace.records.insert(trace.records.begin(), earlier.begin(), earlier.end());
  return trace;
}

SeedResult summarize(std::uint64_t seed, const RunTrace& trace, double target) {
  SeedResult r;
  r.seed = seed;
  r.status = trace.final_status;
  r.evals_to_target = trace.evaluations_to_target(target);
  r.final_best = trace.best_fitness;
  r.evaluations = trace.evaluations;
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

std::size_t ExperimentSummary::successes() const {
  std::size_t k = 0;
  for (const auto& r : results) k += r.evals_to_target.has_value() ? 1 : 0;
  return k;
}

std::optional<std::size_t> ExperimentSummary::median_evals() const {
  std::vector<std::size_t> evals;
  for (const auto& r : results) {
    if (r.evals_to_target) evals.push_back(*r.evals_to_target);
  }
  return lower_median(std::move(evals));
}

fs::path trace_path(const ExperimentConfig& config, std::uint64_t seed) {
  return config.output_dir / ("trace_" + config.stem() + "_seed" + std::to_string(seed) + ".csv");
}

fs::path summary_path(const ExperimentConfig& config) {
  return config.output_dir / ("summary_" + config.stem() + ".csv");
}

fs::path metadata_path(const fs::path& summary) {
  fs::path meta = summary;
  meta.replace_extension(".meta.json");
  return meta;
}

RunTrace run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const ObjectiveProblem problem = problems::make_problem(config.function, config.n, config.rotation_seed);
  return run_seed_impl(config, seed, problem);
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool write_files = !config.output_dir.empty();
  if (write_files) fs::create_directories(config.output_dir);

  const ObjectiveProblem problem = problems::make_problem(config.function, config.n, config.rotation_seed);
  if (write_files && config.dump_rotation && config.function == problems::Function::RotatedEllipsoid) {
    std::ofstream out(config.output_dir / ("rotation_n" + std::to_string(config.n) + "_seed" +
                                           std::to_string(config.rotation_seed) + ".txt"));
    problems::write_rotation(out, *problems::cached_rotation(config.n, config.rotation_seed));
  }

  ExperimentSummary summary;
  summary.config = config;
  summary.results.resize(config.seeds.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
      const std::uint64_t seed = config.seeds[i];
      try {
        const RunTrace trace = run_seed_impl(config, seed, problem);
        summary.results[i] = summarize(seed, trace, config.target_fitness);
        if (write_files) {
          write_atomically(trace_path(config, seed), [&](std::ostream& os) { write_trace_csv(os, trace); });
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::size_t jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.jobs;
  jobs = std::min(jobs, config.seeds.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  if (write_files) {
    const fs::path path = summary_path(config);
    write_atomically(path, [&](std::ostream& os) { write_summary_csv(os, summary); });
    write_atomically(metadata_path(path), [&](std::ostream& os) {
      nlohmann::json meta = to_json(config);
      meta["created_utc"] = utc_timestamp();
      os << meta.dump(2) << '\n';
    });
  }
  return summary;
}

void write_summary_csv(std::ostream& os, const ExperimentSummary& summary) {
  const auto& c = summary.config;
  const std::string prefix =
      std::string(to_string(c.algorithm)) + "," + std::string(problems::to_string(c.function)) + "," + std::to_string(c.n) + ",";
  os << "algorithm,function,n,seed,status,evals_to_target,final_best\n";
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : summary.results) {
    os << prefix << r.seed << ',' << to_string(r.status) << ',';
    if (r.evals_to_target) os << *r.evals_to_target;
    os << ',' << format_real(r.final_best) << '\n';
    best = std::min(best, r.final_best);
  }
  os << prefix << "median," << summary.successes() << '/' << summary.results.size() << ',';
  if (const auto median = summary.median_evals()) os << *median;
  os << ',' << format_real(best) << '\n';
}

}  // namespace lmcma::harness
