#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace lmcma::harness {

/// Element at sorted position floor(p (k-1)). With p = 0.5 this is the
/// median, taking the lower middle element for even counts.
std::optional<std::size_t> lower_quantile(std::vector<std::size_t> values, double p);

inline std::optional<std::size_t> lower_median(std::vector<std::size_t> values) {
  return lower_quantile(std::move(values), 0.5);
}

}  // namespace lmcma::harness
