#pragma once

#include "lmcma/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lmcma::stepsize {

// Cumulative step-size adaptation.

struct CsaState {
  Vector p_sigma;
  double c_sigma = 0.0;
  double d_sigma = 1.0;
};

/// p_sigma <- (1-c) p_sigma + sqrt(c(2-c) mu_w) z_w, then
/// sigma' = sigma exp((c/d)(||p_sigma|| / E||N(0,I)|| - 1)). Returns sigma'.
/// Throws NumericalFailure if the path or sigma' stop being finite.
double csa_update(CsaState& state, const Vector& z_w, double mu_w, double sigma);

// Success rules compare the current population's fitnesses with the
// previous population's.

/// Smoothed success signal shared by the population and median success rules.
struct PsrState {
  double s = 0.0;
  double c_sigma = 0.3;
  double d_sigma = 1.0;
  double z_star = 0.25;
  std::optional<std::vector<double>> prev_fitness;
};

/// Rank index used by the median rule: ceil(0.3 lambda), 1-based.
std::size_t msr_default_index(std::size_t lambda);

/// Median success rule measurement. K counts current values <= the j-th
/// smallest previous value (j is 1-based); returns (2/lambda)(K - (lambda+1)/2).
double msr_z(std::span<const double> prev_fitness, std::span<const double> cur_fitness, std::size_t j);

/// Damping used with the median rule, 2(n-1)/n.
double msr_damping(std::size_t n);

/// Population success rule measurement. Both generations are ranked together
/// (rank 0 is the lowest fitness, equal values place the previous generation
/// first). Returns sum_i(r_prev(i) - r_cur(i)) / lambda^2 - z_star, which is
/// positive when the current population improved on the previous one.
/// Infinite values rank normally; NaN throws std::invalid_argument.
double psr_z(std::span<const double> prev_fitness, std::span<const double> cur_fitness, double z_star);

/// s <- (1-c) s + c z, sigma' = sigma exp(s / d). Returns sigma'.
double psr_update_sigma(PsrState& state, double z, double sigma);

}  // namespace lmcma::stepsize
