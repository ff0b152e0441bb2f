#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace lmcma {

/// Real vector of fixed length n. Houses means, samples and evolution paths.
using Vector = Eigen::VectorXd;

/// Dense column-major matrix. Only the full-matrix baseline uses n x n objects.
using Matrix = Eigen::MatrixXd;

/// Row-major matrix; used for populations and direction stores so that each
/// row (one candidate, one stored vector) is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Raised when an optimizer state field stops being finite, or when the
/// objective returns NaN.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline bool all_finite(const Vector& v) { return all_finite(std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))); }

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace lmcma
