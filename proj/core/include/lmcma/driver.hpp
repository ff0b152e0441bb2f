#pragma once

#include "lmcma/optimizer.hpp"
#include "lmcma/problem.hpp"
#include "lmcma/trace.hpp"

#include <functional>
#include <limits>

namespace lmcma {

struct RunProgress {
  std::size_t evaluations = 0;
  double best_fitness = std::numeric_limits<double>::infinity();
  double elapsed_seconds = 0.0;
};

struct RunOptions {
  /// Record every k-th generation. The final record is always kept.
  std::size_t record_every = 1;
  /// Counters carried over from a checkpoint.
  RunProgress resume_from{};
  /// Called after every completed generation.
  std::function<void(const Optimizer&, const RunProgress&)> on_generation;
};

/// Runs ask/evaluate/tell until the first stopping condition holds.
/// Objective NaN and state blow-ups end the run with NumericalFailure.
RunTrace run(Optimizer& optimizer, const ObjectiveProblem& problem, const Termination& termination,
             const RunOptions& options = {});

}  // namespace lmcma
