#include "lmcma/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace lmcma {

std::size_t default_lambda(std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_lambda: n must be positive");
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

RecombinationWeights make_weights(std::size_t lambda) {
  if (lambda < 2) throw std::invalid_argument("make_weights: lambda must be at least 2");
  RecombinationWeights out;
  out.lambda = lambda;
  out.mu = lambda / 2;
  out.w.resize(out.mu);

  const double log_mu1 = std::log(static_cast<double>(out.mu) + 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < out.mu; ++i) {
    out.w[i] = log_mu1 - std::log(static_cast<double>(i + 1));
    sum += out.w[i];
  }
  for (double& wi : out.w) wi /= sum;
  // Fold the rounding residual into the largest weight.
  double total = 0.0;
  for (double wi : out.w) total += wi;
  out.w[0] += 1.0 - total;
  double sum_sq = 0.0;
  for (double wi : out.w) sum_sq += wi * wi;
  out.mu_w = 1.0 / sum_sq;
  return out;
}

double expected_norm(std::size_t n) {
  const double d = static_cast<double>(n);
  return std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));
}

}  // namespace lmcma
