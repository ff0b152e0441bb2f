#include "lmcma/driver.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace lmcma {

RunTrace run(Optimizer& optimizer, const ObjectiveProblem& problem, const Termination& termination,
             const RunOptions& options) {
  if (problem.dimension != optimizer.dimension()) {
    throw std::invalid_argument("run: problem and optimizer dimensions differ");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return options.resume_from.elapsed_seconds + std::chrono::duration<double>(Clock::now() - start).count();
  };

  RunTrace trace;
  trace.evaluations = options.resume_from.evaluations;
  trace.best_fitness = options.resume_from.best_fitness;

  const std::size_t lambda = optimizer.population_size();
  const std::size_t n = optimizer.dimension();
  const std::size_t record_every = options.record_every == 0 ? 1 : options.record_every;
  std::vector<double> fitness(lambda);
  bool last_recorded = true;

  const auto record = [&] {
    trace.records.push_back({optimizer.iteration(), trace.evaluations, trace.best_fitness, optimizer.sigma(),
                             elapsed()});
    last_recorded = true;
  };
  const auto finish = [&](RunStatus status) {
    if (!last_recorded) record();
    trace.final_status = status;
    return trace;
  };

  if (trace.best_fitness <= termination.target_fitness) return finish(RunStatus::TargetReached);

  for (;;) {
    if (trace.evaluations + lambda > termination.max_evaluations) return finish(RunStatus::BudgetExhausted);
    if (termination.max_seconds && elapsed() >= *termination.max_seconds) return finish(RunStatus::TimeExhausted);
    if (termination.min_sigma && optimizer.sigma() < *termination.min_sigma) {
      return finish(RunStatus::SigmaUnderflow);
    }

    const RowMatrix& population = optimizer.ask();
    for (std::size_t k = 0; k < lambda; ++k) {
      const double f = problem.evaluate({population.row(static_cast<Eigen::Index>(k)).data(), n});
      ++trace.evaluations;
      if (std::isnan(f)) return finish(RunStatus::NumericalFailure);
      fitness[k] = f;
      if (f < trace.best_fitness) {
        trace.best_fitness = f;
        last_recorded = false;
      }
      if (trace.best_fitness <= termination.target_fitness) {
        last_recorded = false;
        return finish(RunStatus::TargetReached);
      }
    }

    try {
      optimizer.tell(fitness);
    } catch (const NumericalFailure&) {
      last_recorded = false;
      return finish(RunStatus::NumericalFailure);
    }
    last_recorded = false;
    if (optimizer.iteration() % record_every == 0) record();

    if (options.on_generation) {
      options.on_generation(optimizer, {trace.evaluations, trace.best_fitness, elapsed()});
    }
  }
}

}  // namespace lmcma
