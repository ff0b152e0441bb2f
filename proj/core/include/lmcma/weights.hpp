#pragma once

#include <cstddef>
#include <vector>

namespace lmcma {

/// Positive recombination weights for the mu best of lambda offspring.
struct RecombinationWeights {
  std::size_t lambda = 0;
  std::size_t mu = 0;
  std::vector<double> w;  // descending, sums to one
  double mu_w = 0.0;      // 1 / sum(w_i^2)
};

/// 4 + floor(3 ln n).
std::size_t default_lambda(std::size_t n);

/// w_i = (ln(mu+1) - ln i) / (mu ln(mu+1) - sum_j ln j), mu = floor(lambda/2).
/// Throws std::invalid_argument for lambda < 2.
RecombinationWeights make_weights(std::size_t lambda);

/// Approximation of E||N(0, I_n)||: sqrt(n) (1 - 1/(4n) + 1/(21 n^2)).
double expected_norm(std::size_t n);

}  // namespace lmcma
