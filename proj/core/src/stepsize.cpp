#include "lmcma/stepsize.hpp"

#include "lmcma/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lmcma::stepsize {

double csa_update(CsaState& state, const Vector& z_w, double mu_w, double sigma) {
  if (z_w.size() != state.p_sigma.size()) throw std::invalid_argument("csa_update: dimension mismatch");
  const double c = state.c_sigma;
  state.p_sigma = (1.0 - c) * state.p_sigma + std::sqrt(c * (2.0 - c) * mu_w) * z_w;
  const double chi_n = expected_norm(static_cast<std::size_t>(state.p_sigma.size()));
  const double next = sigma * std::exp((c / state.d_sigma) * (state.p_sigma.norm() / chi_n - 1.0));
  if (!std::isfinite(next) || !all_finite(state.p_sigma)) throw NumericalFailure("csa_update: non-finite state");
  return next;
}

std::size_t msr_default_index(std::size_t lambda) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(lambda))));
}

double msr_z(std::span<const double> prev_fitness, std::span<const double> cur_fitness, std::size_t j) {
  const std::size_t lambda = cur_fitness.size();
  if (prev_fitness.size() != lambda || lambda == 0) throw std::invalid_argument("msr_z: length mismatch");
  if (j < 1 || j > lambda) throw std::invalid_argument("msr_z: index out of range");

  std::vector<double> sorted(prev_fitness.begin(), prev_fitness.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(j - 1), sorted.end());
  const double reference = sorted[j - 1];
  const auto k_succ = std::count_if(cur_fitness.begin(), cur_fitness.end(), [&](double f) { return f <= reference; });
  const double l = static_cast<double>(lambda);
  return (2.0 / l) * (static_cast<double>(k_succ) - (l + 1.0) / 2.0);
}

double msr_damping(std::size_t n) {
  if (n < 2) throw std::invalid_argument("msr_damping: n must be at least 2");
  const double d = static_cast<double>(n);
  return 2.0 * (d - 1.0) / d;
}

double psr_z(std::span<const double> prev_fitness, std::span<const double> cur_fitness, double z_star) {
  const std::size_t lambda = cur_fitness.size();
  if (prev_fitness.size() != lambda || lambda == 0) throw std::invalid_argument("psr_z: length mismatch");
  const auto is_nan = [](double f) { return std::isnan(f); };
  if (std::any_of(prev_fitness.begin(), prev_fitness.end(), is_nan) ||
      std::any_of(cur_fitness.begin(), cur_fitness.end(), is_nan)) {
    throw std::invalid_argument("psr_z: NaN fitness");
  }

  // Indices [0, lambda) are the previous generation, [lambda, 2 lambda) the
  // current one; a stable sort on fitness keeps previous members first on ties.
  std::vector<std::size_t> order(2 * lambda);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto value = [&](std::size_t i) { return i < lambda ? prev_fitness[i] : cur_fitness[i - lambda]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });

  double rank_sum_difference = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    rank_sum_difference += order[rank] < lambda ? static_cast<double>(rank) : -static_cast<double>(rank);
  }
  const double l = static_cast<double>(lambda);
  return rank_sum_difference / (l * l) - z_star;
}

double psr_update_sigma(PsrState& state, double z, double sigma) {
  state.s = (1.0 - state.c_sigma) * state.s + state.c_sigma * z;
  return sigma * std::exp(state.s / state.d_sigma);
}

}  // namespace lmcma::stepsize
