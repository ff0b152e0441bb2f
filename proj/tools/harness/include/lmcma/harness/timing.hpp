#pragma once

#include "lmcma/harness/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lmcma::harness {

struct TimingRow {
  std::string algorithm;
  std::size_t n = 0;
  double seconds_per_evaluation = 0.0;  // optimizer-internal cost
  std::size_t evaluations_timed = 0;
  double objective_seconds_per_evaluation = 0.0;  // subtracted, not written to CSV
};

struct TimingOptions {
  std::vector<Algorithm> algorithms{Algorithm::LmCma, Algorithm::Cholesky, Algorithm::SepCma};
  std::vector<std::size_t> dims;
  std::size_t evaluations = 100'000;
  /// Cap for the quadratic-cost baseline.
  std::optional<std::size_t> cholesky_evaluations = 10'000;
  std::uint64_t seed = 1;
};

inline constexpr std::size_t kMinTimedEvaluations = 1000;

/// Times each (algorithm, n) on the separable ellipsoid, serially. The
/// ellipsoid's own cost is measured in a separate pass over the same number
/// of evaluations and subtracted. Cholesky points above its dimension limit
/// are skipped.
std::vector<TimingRow> run_timing(const TimingOptions& options);

/// Measures one point; exposed for tests.
TimingRow time_point(Algorithm algorithm, std::size_t n, std::size_t evaluations, std::uint64_t seed);

/// Columns `algorithm,n,seconds_per_evaluation,evaluations_timed`.
void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

}  // namespace lmcma::harness
