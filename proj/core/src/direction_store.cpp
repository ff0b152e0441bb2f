#include "lmcma/direction_store.hpp"

#include "snapshot_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace lmcma {

double forward_coefficient(double c1, double v_squared_norm) {
  const double u = v_squared_norm;
  return std::sqrt(1.0 - c1) / u * (std::sqrt(1.0 + c1 / (1.0 - c1) * u) - 1.0);
}

double inverse_coefficient(double c1, double v_squared_norm) {
  const double u = v_squared_norm;
  return 1.0 / (std::sqrt(1.0 - c1) * u) * (1.0 - 1.0 / std::sqrt(1.0 + c1 / (1.0 - c1) * u));
}

DirectionStore::DirectionStore(std::size_t capacity, std::size_t dimension)
    : capacity_(capacity),
      paths_(RowMatrix::Zero(static_cast<Eigen::Index>(capacity), static_cast<Eigen::Index>(dimension))),
      duals_(RowMatrix::Zero(static_cast<Eigen::Index>(capacity), static_cast<Eigen::Index>(dimension))),
      forward_(capacity, 0.0),
      inverse_(capacity, 0.0),
      stamps_(capacity, 0) {
  if (capacity == 0) throw std::invalid_argument("DirectionStore: capacity must be positive");
  if (dimension == 0) throw std::invalid_argument("DirectionStore: dimension must be positive");
  order_.reserve(capacity);
}

std::size_t DirectionStore::update_set(std::int64_t t, std::int64_t n_steps) {
  if (order_.size() < capacity_) {
    order_.push_back(order_.size());
  } else if (capacity_ > 1) {
    std::size_t i_min = 1;
    std::int64_t smallest = stamps_[order_[1]] - stamps_[order_[0]];
    for (std::size_t i = 2; i < capacity_; ++i) {
      const std::int64_t gap = stamps_[order_[i]] - stamps_[order_[i - 1]];
      if (gap < smallest) {
        smallest = gap;
        i_min = i;
      }
    }
    if (smallest >= n_steps) i_min = 0;
    // Move the recycled slot to the newest position.
    std::rotate(order_.begin() + static_cast<std::ptrdiff_t>(i_min),
                order_.begin() + static_cast<std::ptrdiff_t>(i_min) + 1, order_.end());
  }
  const std::size_t current = order_.back();
  stamps_[current] = t;
  return current;
}

void DirectionStore::write(std::size_t row, const Vector& path, const Vector& dual, double forward,
                           double inverse) {
  if (std::find(order_.begin(), order_.end(), row) == order_.end()) {
    throw std::out_of_range("DirectionStore::write: slot is not in use");
  }
  if (path.size() != paths_.cols() || dual.size() != duals_.cols()) {
    throw std::invalid_argument("DirectionStore::write: dimension mismatch");
  }
  const auto r = static_cast<Eigen::Index>(row);
  paths_.row(r) = path.transpose();
  duals_.row(r) = dual.transpose();
  forward_[row] = forward;
  inverse_[row] = inverse;
}

void DirectionStore::az_into(const Vector& z, Eigen::Ref<Vector> out, double a) const {
  out = z;
  for (std::size_t row : order_) {
    const auto r = static_cast<Eigen::Index>(row);
    const double k = forward_[row] * duals_.row(r).dot(z.transpose());
    out = a * out + k * paths_.row(r).transpose();
  }
}

void DirectionStore::ainvz_inplace(Eigen::Ref<Vector> x, double c) const {
  for (std::size_t row : order_) {
    const auto r = static_cast<Eigen::Index>(row);
    const double k = inverse_[row] * duals_.row(r).dot(x.transpose());
    x = c * x - k * duals_.row(r).transpose();
  }
}

Vector DirectionStore::az(const Vector& z, double a) const {
  Vector x(z.size());
  az_into(z, x, a);
  return x;
}

Vector DirectionStore::ainvz(const Vector& z, double c) const {
  Vector x = z;
  ainvz_inplace(x, c);
  return x;
}

std::size_t DirectionStore::bytes() const {
  return sizeof(double) * static_cast<std::size_t>(paths_.size() + duals_.size()) +
         sizeof(double) * (forward_.capacity() + inverse_.capacity()) +
         sizeof(std::int64_t) * stamps_.capacity() + sizeof(std::size_t) * order_.capacity();
}

using snapshot_io::expect;
using snapshot_io::get_real;
using snapshot_io::put_real;

void DirectionStore::save(std::ostream& os) const {
  os << "store " << capacity_ << ' ' << dimension() << ' ' << order_.size() << '\n';
  os << "order";
  for (std::size_t row : order_) os << ' ' << row;
  os << '\n';
  for (std::size_t row : order_) {
    const auto r = static_cast<Eigen::Index>(row);
    os << "slot " << row << ' ' << stamps_[row];
    put_real(os, forward_[row]);
    put_real(os, inverse_[row]);
    os << "\np";
    for (Eigen::Index i = 0; i < paths_.cols(); ++i) put_real(os, paths_(r, i));
    os << "\nv";
    for (Eigen::Index i = 0; i < duals_.cols(); ++i) put_real(os, duals_(r, i));
    os << '\n';
  }
}

DirectionStore DirectionStore::load(std::istream& is) {
  expect(is, "store");
  std::size_t capacity = 0;
  std::size_t n = 0;
  std::size_t count = 0;
  is >> capacity >> n >> count;
  if (!is || count > capacity) throw std::runtime_error("snapshot: malformed store header");
  DirectionStore store(capacity, n);
  expect(is, "order");
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t row = 0;
    is >> row;
    if (!is || row >= capacity) throw std::runtime_error("snapshot: bad slot index");
    store.order_.push_back(row);
  }
  for (std::size_t i = 0; i < count; ++i) {
    expect(is, "slot");
    std::size_t row = 0;
    is >> row;
    if (!is || row >= capacity) throw std::runtime_error("snapshot: bad slot index");
    const auto r = static_cast<Eigen::Index>(row);
    is >> store.stamps_[row];
    store.forward_[row] = get_real(is);
    store.inverse_[row] = get_real(is);
    expect(is, "p");
    for (std::size_t k = 0; k < n; ++k) store.paths_(r, static_cast<Eigen::Index>(k)) = get_real(is);
    expect(is, "v");
    for (std::size_t k = 0; k < n; ++k) store.duals_(r, static_cast<Eigen::Index>(k)) = get_real(is);
  }
  return store;
}

}  // namespace lmcma
