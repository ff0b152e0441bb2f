#pragma once

#include "lmcma/optimizer.hpp"
#include "lmcma/rng.hpp"
#include "lmcma/stepsize.hpp"
#include "lmcma/weights.hpp"

#include <vector>

namespace lmcma {

struct SepParams {
  std::size_t n = 0;
  std::size_t lambda = 0;
  RecombinationWeights weights;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double mu_cov = 0.0;
  double c_cov = 0.0;

  static SepParams defaults(std::size_t n);
  void validate() const;
};

/// Diagonal covariance update. `sorted_z` holds one row per selected parent,
/// best first, in normalized coordinates (x - m) / (sigma sqrt(c_jj)).
/// Throws NumericalFailure if a diagonal entry becomes non-positive.
Vector sep_diag_update(const Vector& c_diag, const Vector& p_c, const RowMatrix& sorted_z,
                       std::span<const double> weights, double c_cov, double mu_cov);

/// sep-CMA-ES: learns a diagonal covariance (the scaling of each variable)
/// with cumulative step-size adaptation, in O(n) time and memory.
class SepCmaEs final : public Optimizer {
 public:
  SepCmaEs(SepParams params, Vector mean, double sigma, SeededRng rng);

  std::string_view name() const override { return "sepcma"; }
  std::size_t dimension() const override { return params_.n; }
  std::size_t population_size() const override { return params_.lambda; }

  const RowMatrix& ask() override;
  void tell(std::span<const double> fitness) override;

  const Vector& mean() const override { return mean_; }
  double sigma() const override { return sigma_; }
  std::size_t iteration() const override { return t_; }
  std::size_t state_bytes() const override;

  const SepParams& params() const { return params_; }
  const Vector& diagonal() const { return c_diag_; }

 private:
  SepParams params_;
  Vector mean_;
  double sigma_;
  stepsize::CsaState csa_;
  Vector p_c_;
  Vector c_diag_;
  std::size_t t_ = 0;
  SeededRng rng_;

  RowMatrix population_;
  RowMatrix normals_;
  RowMatrix selected_;
  Vector z_w_;
  std::vector<std::size_t> ranking_;
  bool asked_ = false;
};

}  // namespace lmcma
