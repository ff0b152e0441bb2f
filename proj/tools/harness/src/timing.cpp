#include "lmcma/harness/timing.hpp"

#include "lmcma/cholesky_cma.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>

namespace lmcma::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

ExperimentConfig timing_config(Algorithm algorithm, std::size_t n) {
  ExperimentConfig config;
  config.algorithm = algorithm;
  config.function = problems::Function::Ellipsoid;
  config.n = n;
  return config;
}

// Keeps the compiler from discarding objective calls whose result is unused.
volatile double g_sink = 0.0;

}  // namespace

TimingRow time_point(Algorithm algorithm, std::size_t n, std::size_t evaluations, std::uint64_t seed) {
  const ExperimentConfig config = timing_config(algorithm, n);
  const ObjectiveProblem problem = problems::make_problem(config.function, n);
  std::unique_ptr<Optimizer> optimizer = make_optimizer(config, seed);
  const std::size_t lambda = optimizer->population_size();
  std::vector<double> fitness(lambda);

  // Optimizer loop including the objective.
  std::size_t done = 0;
  std::uint64_t restarts = 0;
  const auto start = Clock::now();
  while (done < evaluations) {
    const RowMatrix& population = optimizer->ask();
    for (std::size_t k = 0; k < lambda; ++k) {
      fitness[k] = problem.evaluate({population.row(static_cast<Eigen::Index>(k)).data(), n});
    }
    done += lambda;
    bool restart = false;
    try {
      optimizer->tell(fitness);
    } catch (const NumericalFailure&) {
      restart = true;
    }
    // Converged runs are restarted so that every timed generation does real work.
    if (restart || optimizer->sigma() < 1e-100) optimizer = make_optimizer(config, seed + ++restarts);
  }
  const double total = seconds_since(start);

  // Objective alone, on the same number of evaluations.
  const RowMatrix& sample = optimizer->ask();
  const auto objective_start = Clock::now();
  double sink = 0.0;
  for (std::size_t e = 0; e < done; ++e) {
    sink += problem.evaluate({sample.row(static_cast<Eigen::Index>(e % lambda)).data(), n});
  }
  const double objective_total = seconds_since(objective_start);
  g_sink = sink;

  TimingRow row;
  row.algorithm = std::string(to_string(algorithm));
  row.n = n;
  row.evaluations_timed = done;
  row.objective_seconds_per_evaluation = objective_total / static_cast<double>(done);
  row.seconds_per_evaluation = (total - objective_total) / static_cast<double>(done);
  return row;
}

std::vector<TimingRow> run_timing(const TimingOptions& options) {
  for (std::size_t i = 1; i < options.dims.size(); ++i) {
    if (options.dims[i] <= options.dims[i - 1]) throw std::invalid_argument("timing: dims must be strictly ascending");
  }
  if (options.evaluations < kMinTimedEvaluations) {
    throw std::invalid_argument("timing: at least " + std::to_string(kMinTimedEvaluations) + " evaluations per point");
  }
  std::vector<TimingRow> rows;
  for (Algorithm algorithm : options.algorithms) {
    for (std::size_t n : options.dims) {
      if (n < 2) throw std::invalid_argument("timing: dimensions must be >= 2");
      std::size_t evaluations = options.evaluations;
      if (algorithm == Algorithm::Cholesky) {
        if (n > kMaxCholeskyDimension) {
          std::cerr << "timing: skipping cholesky at n=" << n << " (limit " << kMaxCholeskyDimension << ")\n";
          continue;
        }
        if (options.cholesky_evaluations) {
          evaluations = std::max(kMinTimedEvaluations, std::min(evaluations, *options.cholesky_evaluations));
        }
      }
      rows.push_back(time_point(algorithm, n, evaluations, options.seed));
    }
  }
  return rows;
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "algorithm,n,seconds_per_evaluation,evaluations_timed\n";
  char buffer[40];
  for (const auto& r : rows) {
    std::snprintf(buffer, sizeof buffer, "%.6e", r.seconds_per_evaluation);
    os << r.algorithm << ',' << r.n << ',' << buffer << ',' << r.evaluations_timed << '\n';
  }
}

}  // namespace lmcma::harness
