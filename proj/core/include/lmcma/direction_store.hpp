#pragma once

#include "lmcma/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lmcma {

/// Forward coefficient of a stored pair:
/// (sqrt(1-c1)/u) (sqrt(1 + c1/(1-c1) u) - 1), u = ||v||^2.
double forward_coefficient(double c1, double v_squared_norm);

/// Inverse coefficient of a stored pair:
/// (1/(sqrt(1-c1) u)) (1 - 1/sqrt(1 + c1/(1-c1) u)), u = ||v||^2.
double inverse_coefficient(double c1, double v_squared_norm);

/// Up to m (evolution path, dual vector) pairs from which the Cholesky factor
/// of the sampling covariance and its inverse are applied to vectors in
/// O(m n) without ever forming an n x n matrix.
///
/// Rows are physical slots. `order()` lists the valid slots oldest first;
/// products traverse them in that order.
class DirectionStore {
 public:
  DirectionStore(std::size_t capacity, std::size_t dimension);

  std::size_t capacity() const { return capacity_; }
  std::size_t dimension() const { return static_cast<std::size_t>(paths_.cols()); }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }

  std::span<const std::size_t> order() const { return order_; }
  std::int64_t stamp(std::size_t row) const { return stamps_[row]; }

  auto path(std::size_t row) const { return paths_.row(static_cast<Eigen::Index>(row)); }
  auto dual(std::size_t row) const { return duals_.row(static_cast<Eigen::Index>(row)); }
  double forward(std::size_t row) const { return forward_[row]; }
  double inverse(std::size_t row) const { return inverse_[row]; }

  /// Picks the slot that receives the vectors of iteration t, updates the
  /// slot order and stamps it with t.
  ///
  /// While not full the next free slot is appended. Once full, the newer
  /// member of the closest pair of consecutive slots (smallest stamp gap,
  /// first on ties) is recycled, unless that gap is already >= n_steps, in
  /// which case the oldest slot is. The recycled slot moves to the newest
  /// position.
  std::size_t update_set(std::int64_t t, std::int64_t n_steps);

  /// Overwrites the content of `row`. `row` must be a valid slot.
  void write(std::size_t row, const Vector& path, const Vector& dual, double forward, double inverse);

  /// A z for the factor A = a A_prev + b p v^T accumulated over the stored
  /// pairs: x <- z; for each slot oldest first: x <- a x + b (v . z) p.
  /// Every dual vector is dotted with the input z, not with the partial sum.
  Vector az(const Vector& z, double a) const;
  /// Same as az, writing into `out`, which must not alias `z`.
  void az_into(const Vector& z, Eigen::Ref<Vector> out, double a) const;

  /// Inverse factor times z: x <- z; for each slot oldest first:
  /// x <- c x - d (v . x) v. Exact inverse of az while the stored pairs form
  /// an unbroken insertion chain (no slot recycled yet).
  Vector ainvz(const Vector& z, double c) const;
  void ainvz_inplace(Eigen::Ref<Vector> x, double c) const;

  std::size_t bytes() const;

  void save(std::ostream& os) const;
  static DirectionStore load(std::istream& is);

 private:
  std::size_t capacity_;
  RowMatrix paths_;  // P, capacity x n
  RowMatrix duals_;  // V, capacity x n
  std::vector<double> forward_;
  std::vector<double> inverse_;
  std::vector<std::int64_t> stamps_;
  std::vector<std::size_t> order_;
};

}  // namespace lmcma
