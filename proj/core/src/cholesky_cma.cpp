#include "lmcma/cholesky_cma.hpp"

#include "lmcma/direction_store.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lmcma {

CholeskyParams CholeskyParams::defaults(std::size_t n) {
  if (n == 0) throw std::invalid_argument("CholeskyParams: n must be positive");
  CholeskyParams p;
  p.n = n;
  p.lambda = default_lambda(n);
  p.weights = make_weights(p.lambda);
  const double d = static_cast<double>(n);
  const double mu_w = p.weights.mu_w;
  p.c_sigma = std::sqrt(mu_w) / (std::sqrt(d) + std::sqrt(mu_w));
  p.d_sigma = 1.0 + p.c_sigma + 2.0 * std::max(0.0, std::sqrt((mu_w - 1.0) / (d + 1.0)) - 1.0);
  p.c_c = 4.0 / (d + 4.0);
  p.c_1 = 2.0 / ((d + std::sqrt(2.0)) * (d + std::sqrt(2.0)));
  return p;
}

void CholeskyParams::validate() const {
  if (n == 0) throw std::invalid_argument("CholeskyParams: n must be positive");
  if (lambda < 2 || weights.lambda != lambda) throw std::invalid_argument("CholeskyParams: inconsistent lambda");
  for (double rate : {c_sigma, c_c, c_1}) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("CholeskyParams: learning rates must lie in (0, 1)");
  }
  if (!(d_sigma >= 1.0)) throw std::invalid_argument("CholeskyParams: d_sigma must be >= 1");
}

Matrix rank_one_update_factor(const Matrix& a, const Vector& p_c, const Vector& v, double c_1) {
  Matrix out = a;
  rank_one_update_factor_inplace(out, p_c, v, c_1);
  return out;
}

Matrix rank_one_update_inverse(const Matrix& a_inv, const Vector& v, double c_1) {
  Matrix out = a_inv;
  Vector scratch(v.size());
  rank_one_update_inverse_inplace(out, v, c_1, scratch);
  return out;
}

void rank_one_update_factor_inplace(Matrix& a, const Vector& p_c, const Vector& v, double c_1) {
  const double u = v.squaredNorm();
  a *= std::sqrt(1.0 - c_1);
  if (u > 0.0) a.noalias() += forward_coefficient(c_1, u) * p_c * v.transpose();
}

void rank_one_update_inverse_inplace(Matrix& a_inv, const Vector& v, double c_1, Vector& scratch) {
  const double u = v.squaredNorm();
  if (u > 0.0) scratch.noalias() = a_inv.transpose() * v;  // (v^T A_inv)^T, from the old inverse
  a_inv *= 1.0 / std::sqrt(1.0 - c_1);
  if (u > 0.0) a_inv.noalias() -= inverse_coefficient(c_1, u) * v * scratch.transpose();
}

CholeskyCmaEs::CholeskyCmaEs(CholeskyParams params, Vector mean, double sigma, SeededRng rng)
    : params_(std::move(params)), mean_(std::move(mean)), sigma_(sigma), rng_(std::move(rng)) {
  params_.validate();
  if (params_.n > kMaxCholeskyDimension) {
    throw std::invalid_argument("CholeskyCmaEs: n = " + std::to_string(params_.n) + " exceeds the limit of " +
                                std::to_string(kMaxCholeskyDimension) + " (dense n x n factors)");
  }
  if (static_cast<std::size_t>(mean_.size()) != params_.n) throw std::invalid_argument("CholeskyCmaEs: mean has wrong length");
  if (!all_finite(mean_)) throw std::invalid_argument("CholeskyCmaEs: mean must be finite");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("CholeskyCmaEs: sigma must be positive");

  const auto n = static_cast<Eigen::Index>(params_.n);
  const auto lambda = static_cast<Eigen::Index>(params_.lambda);
  csa_ = {Vector::Zero(n), params_.c_sigma, params_.d_sigma};
  p_c_ = Vector::Zero(n);
  a_ = Matrix::Identity(n, n);
  a_inv_ = Matrix::Identity(n, n);
  population_.resize(lambda, n);
  normals_.resize(lambda, n);
  z_.resize(n);
  z_w_.resize(n);
  v_.resize(n);
  scratch_.resize(n);
  ranking_.resize(params_.lambda);
}

const RowMatrix& CholeskyCmaEs::ask() {
  for (Eigen::Index k = 0; k < population_.rows(); ++k) {
    rng_.fill_normal({z_.data(), params_.n});
    normals_.row(k) = z_.transpose();
    scratch_.noalias() = a_ * z_;
    population_.row(k) = (mean_ + sigma_ * scratch_).transpose();
  }
  asked_ = true;
  return population_;
}

void CholeskyCmaEs::tell(std::span<const double> fitness) {
  if (!asked_) throw std::logic_error("CholeskyCmaEs::tell called without ask");
  if (fitness.size() != params_.lambda) throw std::invalid_argument("CholeskyCmaEs::tell: wrong number of fitness values");
  if (std::any_of(fitness.begin(), fitness.end(), [](double f) { return std::isnan(f); })) {
    throw NumericalFailure("CholeskyCmaEs::tell: NaN fitness");
  }
  asked_ = false;

  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

  mean_.setZero();
  z_w_.setZero();
  for (std::size_t i = 0; i < params_.weights.mu; ++i) {
    const auto row = static_cast<Eigen::Index>(ranking_[i]);
    mean_ += params_.weights.w[i] * population_.row(row).transpose();
    z_w_ += params_.weights.w[i] * normals_.row(row).transpose();
  }

  const double mu_w = params_.weights.mu_w;
  const double next_sigma = stepsize::csa_update(csa_, z_w_, mu_w, sigma_);

  const double c_c = params_.c_c;
  scratch_.noalias() = a_ * z_w_;
  p_c_ = (1.0 - c_c) * p_c_ + std::sqrt(c_c * (2.0 - c_c) * mu_w) * scratch_;

  v_.noalias() = a_inv_ * p_c_;
  rank_one_update_factor_inplace(a_, p_c_, v_, params_.c_1);
  rank_one_update_inverse_inplace(a_inv_, v_, params_.c_1, scratch_);

  sigma_ = next_sigma;
  ++t_;
  if (!all_finite(mean_) || !all_finite(p_c_) || !all_finite(v_) || !(sigma_ > 0.0)) {
    throw NumericalFailure("CholeskyCmaEs: state became non-finite");
  }
}

std::size_t CholeskyCmaEs::state_bytes() const {
  const auto doubles = mean_.size() + csa_.p_sigma.size() + p_c_.size() + a_.size() + a_inv_.size() +
                       population_.size() + normals_.size() + z_.size() + z_w_.size() + v_.size() + scratch_.size();
  return sizeof(double) * static_cast<std::size_t>(doubles) + sizeof(std::size_t) * ranking_.capacity();
}

}  // namespace lmcma
