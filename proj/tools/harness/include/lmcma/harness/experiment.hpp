#pragma once

#include "lmcma/harness/config.hpp"
#include "lmcma/trace.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace lmcma::harness {

struct SeedResult {
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::BudgetExhausted;
  std::optional<std::size_t> evals_to_target;
  double final_best = 0.0;
  std::size_t evaluations = 0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<SeedResult> results;  // in seed order

  std::size_t successes() const;
  std::size_t failures() const { return results.size() - successes(); }
  bool all_reached() const { return failures() == 0; }
  /// Lower median of evals-to-target over successful seeds.
  std::optional<std::size_t> median_evals() const;
};

/// One seed, no files written.
RunTrace run_seed(const ExperimentConfig& config, std::uint64_t seed);

/// Runs every seed (in parallel when config.jobs allows). When output_dir is
/// set, writes one trace CSV per seed, the summary CSV and a metadata JSON
/// sidecar carrying the target and the timestamp.
ExperimentSummary run_experiment(const ExperimentConfig& config);

std::filesystem::path trace_path(const ExperimentConfig& config, std::uint64_t seed);
std::filesystem::path summary_path(const ExperimentConfig& config);
std::filesystem::path metadata_path(const std::filesystem::path& summary);

/// Columns `algorithm,function,n,seed,status,evals_to_target,final_best`;
/// one row per seed followed by a row whose seed field is `median`, whose
/// status field is `successes/runs`, and whose final_best is the best over
/// seeds. evals_to_target is empty when the target was not reached.
void write_summary_csv(std::ostream& os, const ExperimentSummary& summary);

}  // namespace lmcma::harness
