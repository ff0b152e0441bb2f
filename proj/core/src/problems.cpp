#include "lmcma/problems.hpp"

#include "lmcma/rng.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>

namespace lmcma::problems {

namespace {

std::vector<double> ellipsoid_weights(std::size_t n) {
  std::vector<double> w(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(10.0, 6.0 * static_cast<double>(i) / denom);
  return w;
}

double weighted_sum_of_squares(std::span<const double> x, const std::vector<double>& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * x[i] * x[i];
  return sum;
}

void require_dimension(std::span<const double> x, std::size_t minimum, const char* who) {
  if (x.size() < minimum) throw std::invalid_argument(std::string(who) + ": dimension too small");
}

}  // namespace

double sphere(std::span<const double> x) {
  double sum = 0.0;
  for (double xi : x) sum += xi * xi;
  return sum;
}

double ellipsoid(std::span<const double> x) {
  require_dimension(x, 2, "ellipsoid");
  const double denom = static_cast<double>(x.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += std::pow(10.0, 6.0 * static_cast<double>(i) / denom) * x[i] * x[i];
  }
  return sum;
}

double rosenbrock(std::span<const double> x) {
  require_dimension(x, 2, "rosenbrock");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

Vector RotationMatrix::apply(std::span<const double> x) const {
  if (x.size() != n) throw std::invalid_argument("RotationMatrix::apply: dimension mismatch");
  return q * Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(n));
}

Vector RotationMatrix::apply_transpose(std::span<const double> x) const {
  if (x.size() != n) throw std::invalid_argument("RotationMatrix::apply_transpose: dimension mismatch");
  return q.transpose() * Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(n));
}

namespace {

// Classical Gram-Schmidt applied twice per column. Returns false when a
// column is numerically dependent on its predecessors.
bool orthonormalize_columns(Matrix& g) {
  const Eigen::Index n = g.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double original = g.col(j).norm();
    for (int pass = 0; pass < 2 && j > 0; ++pass) {
      const Vector projection = g.leftCols(j).transpose() * g.col(j);
      g.col(j).noalias() -= g.leftCols(j) * projection;
    }
    const double remaining = g.col(j).norm();
    if (!(remaining > 1e-8 * original)) return false;
    g.col(j) /= remaining;
  }
  return true;
}

}  // namespace

RotationMatrix random_rotation(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_rotation: n must be at least 2");
  if (n > kMaxRotationDimension) {
    throw std::invalid_argument("random_rotation: n = " + std::to_string(n) + " exceeds the limit of " +
                                std::to_string(kMaxRotationDimension));
  }
  const auto size = static_cast<Eigen::Index>(n);
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const std::uint64_t used_seed = seed + static_cast<std::uint64_t>(attempt);
    SeededRng rng(used_seed);
    Matrix g(size, size);
    rng.fill_normal({g.data(), n * n});
    if (orthonormalize_columns(g)) return RotationMatrix{n, used_seed, g};
  }
  throw std::runtime_error("random_rotation: orthonormalization failed");
}

std::shared_ptr<const RotationMatrix> cached_rotation(std::size_t n, std::uint64_t seed) {
  using Key = std::pair<std::size_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_future<std::shared_ptr<const RotationMatrix>>> cache;

  std::promise<std::shared_ptr<const RotationMatrix>> promise;
  std::shared_future<std::shared_ptr<const RotationMatrix>> future;
  bool builder = false;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({n, seed});
    if (it == cache.end()) {
      future = promise.get_future().share();
      cache.emplace(Key{n, seed}, future);
      builder = true;
    } else {
      future = it->second;
    }
  }
  if (builder) {
    try {
      promise.set_value(std::make_shared<const RotationMatrix>(random_rotation(n, seed)));
    } catch (...) {
      {
        std::lock_guard lock(mutex);
        cache.erase({n, seed});
      }
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

double rotated_ellipsoid(std::span<const double> x, const RotationMatrix& q) {
  const Vector y = q.apply(x);
  return ellipsoid(as_span(y));
}

void write_rotation(std::ostream& os, const RotationMatrix& q) {
  char buffer[40];
  for (Eigen::Index i = 0; i < q.q.rows(); ++i) {
    for (Eigen::Index j = 0; j < q.q.cols(); ++j) {
      std::snprintf(buffer, sizeof buffer, "%.17g", q.q(i, j));
      if (j > 0) os << ' ';
      os << buffer;
    }
    os << '\n';
  }
}

std::string_view to_string(Function f) {
  switch (f) {
    case Function::Sphere: return "sphere";
    case Function::Ellipsoid: return "elli";
    case Function::RotatedEllipsoid: return "ellirot";
    case Function::Rosenbrock: return "rosen";
  }
  return "unknown";
}

std::optional<Function> parse_function(std::string_view name) {
  if (name == "sphere") return Function::Sphere;
  if (name == "elli") return Function::Ellipsoid;
  if (name == "ellirot" || name == "elli_rot") return Function::RotatedEllipsoid;
  if (name == "rosen" || name == "rosenbrock") return Function::Rosenbrock;
  return std::nullopt;
}

ObjectiveProblem make_problem(Function f, std::size_t n, std::uint64_t rotation_seed) {
  if (n == 0) throw std::invalid_argument("make_problem: n must be positive");
  ObjectiveProblem problem;
  problem.name = std::string(to_string(f));
  problem.dimension = n;
  problem.optimum_value = 0.0;
  switch (f) {
    case Function::Sphere:
      problem.evaluate = [](std::span<const double> x) { return sphere(x); };
      break;
    case Function::Ellipsoid: {
      if (n < 2) throw std::invalid_argument("make_problem: ellipsoid needs n >= 2");
      auto w = std::make_shared<const std::vector<double>>(ellipsoid_weights(n));
      problem.evaluate = [w](std::span<const double> x) { return weighted_sum_of_squares(x, *w); };
      break;
    }
    case Function::RotatedEllipsoid: {
      auto q = cached_rotation(n, rotation_seed);
      auto w = std::make_shared<const std::vector<double>>(ellipsoid_weights(n));
      problem.evaluate = [q, w](std::span<const double> x) {
        const Vector y = q->apply(x);
        return weighted_sum_of_squares(as_span(y), *w);
      };
      break;
    }
    case Function::Rosenbrock:
      if (n < 2) throw std::invalid_argument("make_problem: rosenbrock needs n >= 2");
      problem.evaluate = [](std::span<const double> x) { return rosenbrock(x); };
      break;
  }
  return problem;
}

}  // namespace lmcma::problems
