#pragma once

#include "lmcma/problem.hpp"
#include "lmcma/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <span>
#include <vector>

namespace lmcma::problems {

/// Largest dimension for which a dense rotation is generated.
inline constexpr std::size_t kMaxRotationDimension = 4096;

double sphere(std::span<const double> x);

/// sum_i 10^(6 (i-1)/(n-1)) x_i^2. Throws std::invalid_argument for n < 2.
double ellipsoid(std::span<const double> x);

/// Chained form sum_{i<n} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2. Needs n >= 2.
double rosenbrock(std::span<const double> x);

/// Orthogonal n x n matrix, stored row-major.
struct RotationMatrix {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  RowMatrix q;

  Vector apply(std::span<const double> x) const;
  Vector apply_transpose(std::span<const double> x) const;
};

/// Gram-Schmidt (with one re-orthogonalization pass) over the columns of an
/// n x n standard-normal matrix drawn from SeededRng(seed). A rank-deficient
/// draw is retried with seed+1, at most three times. Deterministic per
/// (n, seed). Refuses n < 2 and n > kMaxRotationDimension.
RotationMatrix random_rotation(std::size_t n, std::uint64_t seed);

/// Process-wide cache; the first caller builds, concurrent callers wait.
std::shared_ptr<const RotationMatrix> cached_rotation(std::size_t n, std::uint64_t seed);

/// ellipsoid(Q x).
double rotated_ellipsoid(std::span<const double> x, const RotationMatrix& q);

/// Row-major text dump, 17 significant digits, one matrix row per line.
void write_rotation(std::ostream& os, const RotationMatrix& q);

enum class Function { Sphere, Ellipsoid, RotatedEllipsoid, Rosenbrock };

std::string_view to_string(Function f);
/// Accepts the CLI spellings: sphere, elli, ellirot (or elli_rot), rosen (or rosenbrock).
std::optional<Function> parse_function(std::string_view name);

/// Builds the objective for `f` at dimension n. `rotation_seed` only matters
/// for the rotated ellipsoid.
ObjectiveProblem make_problem(Function f, std::size_t n, std::uint64_t rotation_seed = 1);

}  // namespace lmcma::problems
