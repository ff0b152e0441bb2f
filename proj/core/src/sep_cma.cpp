#include "lmcma/sep_cma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lmcma {

SepParams SepParams::defaults(std::size_t n) {
  if (n == 0) throw std::invalid_argument("SepParams: n must be positive");
  SepParams p;
  p.n = n;
  p.lambda = default_lambda(n);
  p.weights = make_weights(p.lambda);
  const double d = static_cast<double>(n);
  const double mu_w = p.weights.mu_w;
  p.c_sigma = (mu_w + 2.0) / (d + mu_w + 3.0);
  p.d_sigma = 1.0 + p.c_sigma + 2.0 * std::max(0.0, std::sqrt((mu_w - 1.0) / (d + 1.0)) - 1.0);
  p.c_c = 4.0 / (d + 4.0);
  p.mu_cov = mu_w;
  const double full = 2.0 / (p.mu_cov * (d + std::sqrt(2.0)) * (d + std::sqrt(2.0))) +
                      (1.0 - 1.0 / p.mu_cov) * std::min(1.0, (2.0 * p.mu_cov - 1.0) / ((d + 2.0) * (d + 2.0) + p.mu_cov));
  p.c_cov = std::min(1.0, (d + 2.0) / 3.0 * full);
  return p;
}

void SepParams::validate() const {
  if (n == 0) throw std::invalid_argument("SepParams: n must be positive");
  if (lambda < 2 || weights.lambda != lambda) throw std::invalid_argument("SepParams: inconsistent lambda");
  for (double rate : {c_sigma, c_c}) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("SepParams: learning rates must lie in (0, 1)");
  }
  if (!(c_cov >= 0.0 && c_cov < 1.0)) throw std::invalid_argument("SepParams: c_cov must lie in [0, 1)");
  if (!(mu_cov >= 1.0)) throw std::invalid_argument("SepParams: mu_cov must be >= 1");
  if (!(d_sigma > 0.0)) throw std::invalid_argument("SepParams: d_sigma must be positive");
}

Vector sep_diag_update(const Vector& c_diag, const Vector& p_c, const RowMatrix& sorted_z,
                       std::span<const double> weights, double c_cov, double mu_cov) {
  if (p_c.size() != c_diag.size() || sorted_z.cols() != c_diag.size()) {
    throw std::invalid_argument("sep_diag_update: dimension mismatch");
  }
  if (static_cast<std::size_t>(sorted_z.rows()) < weights.size()) {
    throw std::invalid_argument("sep_diag_update: fewer parents than weights");
  }
  Vector weighted_z_sq = Vector::Zero(c_diag.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weighted_z_sq += weights[i] * sorted_z.row(static_cast<Eigen::Index>(i)).transpose().cwiseAbs2();
  }
  Vector out = (1.0 - c_cov) * c_diag + (c_cov / mu_cov) * p_c.cwiseAbs2() +
               (c_cov * (1.0 - 1.0 / mu_cov)) * c_diag.cwiseProduct(weighted_z_sq);
  if (!all_finite(out) || (out.array() <= 0.0).any()) {
    throw NumericalFailure("sep_diag_update: diagonal entry became non-positive");
  }
  return out;
}

SepCmaEs::SepCmaEs(SepParams params, Vector mean, double sigma, SeededRng rng)
    : params_(std::move(params)), mean_(std::move(mean)), sigma_(sigma), rng_(std::move(rng)) {
  params_.validate();
  if (static_cast<std::size_t>(mean_.size()) != params_.n) throw std::invalid_argument("SepCmaEs: mean has wrong length");
  if (!all_finite(mean_)) throw std::invalid_argument("SepCmaEs: mean must be finite");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("SepCmaEs: sigma must be positive");

  const auto n = static_cast<Eigen::Index>(params_.n);
  const auto lambda = static_cast<Eigen::Index>(params_.lambda);
  csa_ = {Vector::Zero(n), params_.c_sigma, params_.d_sigma};
  p_c_ = Vector::Zero(n);
  c_diag_ = Vector::Ones(n);
  population_.resize(lambda, n);
  normals_.resize(lambda, n);
  selected_.resize(static_cast<Eigen::Index>(params_.weights.mu), n);
  z_w_.resize(n);
  ranking_.resize(params_.lambda);
}

const RowMatrix& SepCmaEs::ask() {
  const Vector scale = c_diag_.cwiseSqrt();
  for (Eigen::Index k = 0; k < population_.rows(); ++k) {
    rng_.fill_normal({normals_.row(k).data(), params_.n});
    population_.row(k) = (mean_ + sigma_ * scale.cwiseProduct(normals_.row(k).transpose())).transpose();
  }
  asked_ = true;
  return population_;
}

void SepCmaEs::tell(std::span<const double> fitness) {
  if (!asked_) throw std::logic_error("SepCmaEs::tell called without ask");
  if (fitness.size() != params_.lambda) throw std::invalid_argument("SepCmaEs::tell: wrong number of fitness values");
  if (std::any_of(fitness.begin(), fitness.end(), [](double f) { return std::isnan(f); })) {
    throw NumericalFailure("SepCmaEs::tell: NaN fitness");
  }
  asked_ = false;

  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

  mean_.setZero();
  z_w_.setZero();
  for (std::size_t i = 0; i < params_.weights.mu; ++i) {
    const auto row = static_cast<Eigen::Index>(ranking_[i]);
    selected_.row(static_cast<Eigen::Index>(i)) = normals_.row(row);
    mean_ += params_.weights.w[i] * population_.row(row).transpose();
    z_w_ += params_.weights.w[i] * normals_.row(row).transpose();
  }

  const double mu_w = params_.weights.mu_w;
  const double next_sigma = stepsize::csa_update(csa_, z_w_, mu_w, sigma_);

  // (m' - m) / sigma = sqrt(C) z_w
  const double c_c = params_.c_c;
  p_c_ = (1.0 - c_c) * p_c_ + std::sqrt(c_c * (2.0 - c_c) * mu_w) * c_diag_.cwiseSqrt().cwiseProduct(z_w_);
  c_diag_ = sep_diag_update(c_diag_, p_c_, selected_, params_.weights.w, params_.c_cov, params_.mu_cov);

  sigma_ = next_sigma;
  ++t_;
  if (!all_finite(mean_) || !all_finite(p_c_) || !(sigma_ > 0.0)) {
    throw NumericalFailure("SepCmaEs: state became non-finite");
  }
}

std::size_t SepCmaEs::state_bytes() const {
  const auto doubles = mean_.size() + csa_.p_sigma.size() + p_c_.size() + c_diag_.size() + population_.size() +
                       normals_.size() + selected_.size() + z_w_.size();
  return sizeof(double) * static_cast<std::size_t>(doubles) + sizeof(std::size_t) * ranking_.capacity();
}

}  // namespace lmcma
