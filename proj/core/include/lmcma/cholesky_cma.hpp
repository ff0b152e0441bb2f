#pragma once

#include "lmcma/optimizer.hpp"
#include "lmcma/rng.hpp"
#include "lmcma/stepsize.hpp"
#include "lmcma/weights.hpp"

#include <vector>

namespace lmcma {

/// Largest dimension accepted by the full-matrix baseline.
inline constexpr std::size_t kMaxCholeskyDimension = 4096;

struct CholeskyParams {
  std::size_t n = 0;
  std::size_t lambda = 0;
  RecombinationWeights weights;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;

  static CholeskyParams defaults(std::size_t n);
  void validate() const;
};

/// A' = sqrt(1-c1) A + (sqrt(1-c1)/||v||^2)(sqrt(1 + c1/(1-c1) ||v||^2) - 1) p_c v^T,
/// where v = A^-1 p_c. Gives A'A'^T = (1-c1) A A^T + c1 p_c p_c^T.
Matrix rank_one_update_factor(const Matrix& a, const Vector& p_c, const Vector& v, double c_1);

/// Inverse of the factor produced by rank_one_update_factor for the same v.
Matrix rank_one_update_inverse(const Matrix& a_inv, const Vector& v, double c_1);

/// In-place variants used by the optimizer.
void rank_one_update_factor_inplace(Matrix& a, const Vector& p_c, const Vector& v, double c_1);
void rank_one_update_inverse_inplace(Matrix& a_inv, const Vector& v, double c_1, Vector& scratch);

/// Cholesky-CMA-ES: rank-one covariance update carried out directly on an
/// explicit n x n factor and its inverse, with cumulative step-size
/// adaptation. O(n^2) time per sample and O(n^2) memory.
class CholeskyCmaEs final : public Optimizer {
 public:
  /// Throws std::invalid_argument above kMaxCholeskyDimension.
  CholeskyCmaEs(CholeskyParams params, Vector mean, double sigma, SeededRng rng);

  std::string_view name() const override { return "cholesky"; }
  std::size_t dimension() const override { return params_.n; }
  std::size_t population_size() const override { return params_.lambda; }

  const RowMatrix& ask() override;
  void tell(std::span<const double> fitness) override;

  const Vector& mean() const override { return mean_; }
  double sigma() const override { return sigma_; }
  std::size_t iteration() const override { return t_; }
  std::size_t state_bytes() const override;

  const CholeskyParams& params() const { return params_; }
  const Matrix& factor() const { return a_; }
  const Matrix& inverse_factor() const { return a_inv_; }

 private:
  CholeskyParams params_;
  Vector mean_;
  double sigma_;
  stepsize::CsaState csa_;
  Vector p_c_;
  Matrix a_;
  Matrix a_inv_;
  std::size_t t_ = 0;
  SeededRng rng_;

  RowMatrix population_;
  RowMatrix normals_;
  Vector z_;
  Vector z_w_;
  Vector v_;
  Vector scratch_;
  std::vector<std::size_t> ranking_;
  bool asked_ = false;
};

}  // namespace lmcma
