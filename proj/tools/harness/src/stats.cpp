#include "lmcma/harness/stats.hpp"

#include <algorithm>
#include <cmath>

namespace lmcma::harness {

std::optional<std::size_t> lower_quantile(std::vector<std::size_t> values, double p) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto index = static_cast<std::size_t>(std::floor(p * static_cast<double>(values.size() - 1)));
  return values[std::min(index, values.size() - 1)];
}

}  // namespace lmcma::harness
