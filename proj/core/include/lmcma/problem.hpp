#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace lmcma {

/// A black-box objective. `evaluate` must be pure: the same input always
/// yields the same fitness, so candidates may be evaluated in any order.
struct ObjectiveProblem {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> evaluate;
  std::optional<double> optimum_value;

  double operator()(std::span<const double> x) const { return evaluate(x); }
};

}  // namespace lmcma
