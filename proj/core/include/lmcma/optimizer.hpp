#pragma once

#include "lmcma/types.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace lmcma {

/// Ask/tell interface shared by the three evolution strategies.
///
/// `ask` samples a full population of lambda candidates (one per row);
/// `tell` consumes their fitnesses in the same row order and advances the
/// distribution by one generation. Calls must alternate.
class Optimizer {
 public:
  virtual ~Optimizer() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::size_t population_size() const = 0;

  virtual const RowMatrix& ask() = 0;
  virtual void tell(std::span<const double> fitness) = 0;

  virtual const Vector& mean() const = 0;
  virtual double sigma() const = 0;
  virtual std::size_t iteration() const = 0;

  /// Heap bytes held by the optimizer's vectors and matrices.
  virtual std::size_t state_bytes() const = 0;
};

}  // namespace lmcma
