#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace lmcma {

/// Stopping conditions for a run. The target is checked after every single
/// evaluation; a generation is only started if its lambda evaluations fit in
/// the remaining budget.
struct Termination {
  double target_fitness = 1e-10;
  std::size_t max_evaluations = 1'000'000;
  std::optional<double> max_seconds;
  std::optional<double> min_sigma = 1e-300;
};

enum class RunStatus {
  TargetReached,
  BudgetExhausted,
  TimeExhausted,
  SigmaUnderflow,
  NumericalFailure,
};

std::string_view to_string(RunStatus status);
std::optional<RunStatus> parse_run_status(std::string_view text);

struct TraceRecord {
  std::size_t iteration = 0;
  std::size_t evaluations = 0;
  double best_fitness = 0.0;  // best so far over all evaluations
  double sigma = 0.0;
  double elapsed_seconds = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  RunStatus final_status = RunStatus::BudgetExhausted;
  std::size_t evaluations = 0;
  double best_fitness = 0.0;

  /// Evaluations at the first record whose best fitness is <= target.
  std::optional<std::size_t> evaluations_to_target(double target) const;
};

/// Header `iteration,evaluations,best_fitness,sigma,elapsed_seconds`, then
/// one line per record. Reals are written with 17 significant digits.
void write_trace_csv(std::ostream& os, const RunTrace& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& is);

}  // namespace lmcma
