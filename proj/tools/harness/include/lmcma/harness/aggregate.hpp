#pragma once

#include "lmcma/harness/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lmcma::harness {

struct SummaryRow {
  std::string algorithm;
  std::string function;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::BudgetExhausted;
  std::optional<std::size_t> evals_to_target;
  double final_best = 0.0;
};

/// Reads the per-seed rows of a summary CSV (the median row is skipped).
std::vector<SummaryRow> read_summary_csv(std::istream& is);

struct AggregateRow {
  std::string algorithm;
  std::string function;
  std::size_t n = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::optional<std::size_t> median_evals;  // over successful runs
  std::optional<std::size_t> q1_evals;
  std::optional<std::size_t> q3_evals;
};

/// One row per (algorithm, function, n), sorted. Throws std::invalid_argument
/// when the metadata sidecars disagree on the target fitness.
std::vector<AggregateRow> aggregate(const std::vector<std::filesystem::path>& summaries);
std::vector<AggregateRow> aggregate_rows(const std::vector<SummaryRow>& rows);

/// Columns `algorithm,function,n,runs,failures,median_evals,q1_evals,q3_evals`.
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace lmcma::harness
