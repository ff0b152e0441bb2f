#include "lmcma/lm_cma.hpp"

#include "snapshot_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lmcma {

using snapshot_io::expect;
using snapshot_io::get_real;
using snapshot_io::put_real;

LmCmaParams LmCmaParams::defaults(std::size_t n) {
  if (n == 0) throw std::invalid_argument("LmCmaParams: n must be positive");
  LmCmaParams p;
  p.n = n;
  p.set_lambda(default_lambda(n));
  p.set_memory(default_lambda(n));
  p.c_1 = 1.0 / (10.0 * std::log(static_cast<double>(n) + 1.0));
  return p;
}

void LmCmaParams::set_lambda(std::size_t new_lambda) {
  lambda = new_lambda;
  weights = make_weights(new_lambda);
}

void LmCmaParams::set_memory(std::size_t new_m, bool keep_c_c) {
  m = new_m;
  n_steps = new_m;
  if (!keep_c_c && new_m > 0) c_c = 1.0 / static_cast<double>(new_m);
}

void LmCmaParams::validate() const {
  if (n == 0) throw std::invalid_argument("LmCmaParams: n must be positive");
  if (lambda < 2 || weights.lambda != lambda) throw std::invalid_argument("LmCmaParams: inconsistent lambda");
  if (m == 0) throw std::invalid_argument("LmCmaParams: m must be positive");
  if (!(c_1 > 0.0 && c_1 < 1.0)) throw std::invalid_argument("LmCmaParams: c_1 must lie in (0, 1)");
  if (!(c_c > 0.0 && c_c <= 1.0)) throw std::invalid_argument("LmCmaParams: c_c must lie in (0, 1]");
  if (!(c_sigma > 0.0 && c_sigma <= 1.0)) throw std::invalid_argument("LmCmaParams: c_sigma must lie in (0, 1]");
  if (!(d_sigma > 0.0)) throw std::invalid_argument("LmCmaParams: d_sigma must be positive");
  if (rule == SuccessRule::Median && n < 2) throw std::invalid_argument("LmCmaParams: median rule needs n >= 2");
}

LmCmaEs::LmCmaEs(LmCmaParams params, Vector mean, double sigma, SeededRng rng)
    : LmCmaEs(params, std::move(mean), sigma, std::move(rng), DirectionStore(params.m, params.n)) {}

LmCmaEs::LmCmaEs(LmCmaParams params, Vector mean, double sigma, SeededRng rng, DirectionStore store)
    : params_(std::move(params)),
      mean_(std::move(mean)),
      sigma_(sigma),
      p_c_(Vector::Zero(static_cast<Eigen::Index>(params_.n))),
      store_(std::move(store)),
      rng_(std::move(rng)) {
  params_.validate();
  if (static_cast<std::size_t>(mean_.size()) != params_.n) throw std::invalid_argument("LmCmaEs: mean has wrong length");
  if (!all_finite(mean_)) throw std::invalid_argument("LmCmaEs: mean must be finite");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("LmCmaEs: sigma must be positive");

  success_.c_sigma = params_.c_sigma;
  success_.z_star = params_.z_star;
  success_.d_sigma = params_.rule == SuccessRule::Median ? stepsize::msr_damping(params_.n) : params_.d_sigma;

  a_ = std::sqrt(1.0 - params_.c_1);
  c_inv_ = 1.0 / a_;
  population_.resize(static_cast<Eigen::Index>(params_.lambda), static_cast<Eigen::Index>(params_.n));
  scratch_.resize(static_cast<Eigen::Index>(params_.n));
  z_.resize(static_cast<Eigen::Index>(params_.n));
  ranking_.resize(params_.lambda);
}

const RowMatrix& LmCmaEs::ask() {
  const auto n = static_cast<std::size_t>(params_.n);
  for (Eigen::Index k = 0; k < population_.rows(); ++k) {
    rng_.fill_normal({z_.data(), n});
    store_.az_into(z_, scratch_, a_);
    population_.row(k) = (mean_ + sigma_ * scratch_).transpose();
  }
  asked_ = true;
  return population_;
}

void LmCmaEs::tell(std::span<const double> fitness) {
  if (!asked_) throw std::logic_error("LmCmaEs::tell called without ask");
  if (fitness.size() != params_.lambda) throw std::invalid_argument("LmCmaEs::tell: wrong number of fitness values");
  if (std::any_of(fitness.begin(), fitness.end(), [](double f) { return std::isnan(f); })) {
    throw NumericalFailure("LmCmaEs::tell: NaN fitness");
  }
  asked_ = false;

  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

  // scratch_ keeps the old mean while the new one is recombined.
  scratch_ = mean_;
  mean_.setZero();
  for (std::size_t i = 0; i < params_.weights.mu; ++i) {
    mean_ += params_.weights.w[i] * population_.row(static_cast<Eigen::Index>(ranking_[i])).transpose();
  }

  const double c_c = params_.c_c;
  p_c_ = (1.0 - c_c) * p_c_ + (std::sqrt(c_c * (2.0 - c_c) * params_.weights.mu_w) / sigma_) * (mean_ - scratch_);

  Vector v = store_.ainvz(p_c_, c_inv_);
  const double v_sq = v.squaredNorm();
  if (v_sq > 0.0) {
    const std::size_t row = store_.update_set(static_cast<std::int64_t>(t_), static_cast<std::int64_t>(params_.n_steps));
    store_.write(row, p_c_, v, forward_coefficient(params_.c_1, v_sq), inverse_coefficient(params_.c_1, v_sq));
  }

  if (success_.prev_fitness) {
    const auto& prev = *success_.prev_fitness;
    const double z = params_.rule == SuccessRule::Population
                         ? stepsize::psr_z(prev, fitness, success_.z_star)
                         : stepsize::msr_z(prev, fitness, stepsize::msr_default_index(params_.lambda));
    sigma_ = stepsize::psr_update_sigma(success_, z, sigma_);
    success_.prev_fitness->assign(fitness.begin(), fitness.end());
  } else {
    success_.prev_fitness.emplace(fitness.begin(), fitness.end());
  }

  ++t_;
  if (!all_finite(mean_) || !all_finite(p_c_) || !std::isfinite(sigma_) || !(sigma_ > 0.0) || !std::isfinite(v_sq)) {
    throw NumericalFailure("LmCmaEs: state became non-finite");
  }
}

std::size_t LmCmaEs::state_bytes() const {
  std::size_t bytes = store_.bytes();
  bytes += sizeof(double) * static_cast<std::size_t>(mean_.size() + p_c_.size() + scratch_.size() + z_.size() + population_.size());
  bytes += sizeof(std::size_t) * ranking_.capacity();
  bytes += sizeof(double) * params_.weights.w.capacity();
  if (success_.prev_fitness) bytes += sizeof(double) * success_.prev_fitness->capacity();
  return bytes;
}

namespace {

constexpr const char* kSnapshotMagic = "lmcma-snapshot";
constexpr int kSnapshotVersion = 1;

void put_vector(std::ostream& os, const char* key, const Vector& v) {
  os << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) put_real(os, v[i]);
  os << '\n';
}

Vector get_vector(std::istream& is, const char* key, std::size_t n) {
  expect(is, key);
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = get_real(is);
  return v;
}

}  // namespace

void LmCmaEs::save(std::ostream& os) const {
  os << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
  os << "params " << params_.n << ' ' << params_.lambda << ' ' << params_.m << ' ' << params_.n_steps;
  put_real(os, params_.c_c);
  put_real(os, params_.c_1);
  put_real(os, params_.c_sigma);
  put_real(os, params_.d_sigma);
  put_real(os, params_.z_star);
  os << ' ' << (params_.rule == SuccessRule::Population ? "psr" : "msr") << '\n';
  os << "t " << t_ << '\n';
  os << "sigma";
  put_real(os, sigma_);
  os << '\n';
  put_vector(os, "mean", mean_);
  put_vector(os, "p_c", p_c_);
  os << "success";
  put_real(os, success_.s);
  os << ' ' << (success_.prev_fitness ? 1 : 0);
  if (success_.prev_fitness) {
    for (double f : *success_.prev_fitness) put_real(os, f);
  }
  os << '\n';
  os << "rng ";
  rng_.save(os);
  os << '\n';
  store_.save(os);
  os << "end\n";
}

LmCmaEs LmCmaEs::load(std::istream& is) {
  expect(is, kSnapshotMagic);
  int version = 0;
  is >> version;
  if (version != kSnapshotVersion) throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));

  expect(is, "params");
  std::size_t n = 0;
  std::size_t lambda = 0;
  std::size_t m = 0;
  std::size_t n_steps = 0;
  is >> n >> lambda >> m >> n_steps;
  if (!is) throw std::runtime_error("snapshot: malformed params");
  LmCmaParams params = LmCmaParams::defaults(n);
  params.set_lambda(lambda);
  params.set_memory(m);
  params.n_steps = n_steps;
  params.c_c = get_real(is);
  params.c_1 = get_real(is);
  params.c_sigma = get_real(is);
  params.d_sigma = get_real(is);
  params.z_star = get_real(is);
  std::string rule;
  is >> rule;
  if (rule == "psr") {
    params.rule = SuccessRule::Population;
  } else if (rule == "msr") {
    params.rule = SuccessRule::Median;
  } else {
    throw std::runtime_error("snapshot: unknown success rule '" + rule + "'");
  }

  expect(is, "t");
  std::size_t t = 0;
  is >> t;
  expect(is, "sigma");
  const double sigma = get_real(is);
  Vector mean = get_vector(is, "mean", n);
  Vector p_c = get_vector(is, "p_c", n);

  expect(is, "success");
  const double s = get_real(is);
  int has_prev = 0;
  is >> has_prev;
  std::optional<std::vector<double>> prev;
  if (has_prev) {
    prev.emplace(lambda);
    for (double& f : *prev) f = get_real(is);
  }

  expect(is, "rng");
  SeededRng rng;
  rng.load(is);
  DirectionStore store = DirectionStore::load(is);
  if (store.capacity() != params.m || store.dimension() != n) throw std::runtime_error("snapshot: store shape mismatch");
  expect(is, "end");

  LmCmaEs es(params, std::move(mean), sigma, std::move(rng), std::move(store));
  es.p_c_ = std::move(p_c);
  es.t_ = t;
  es.success_.s = s;
  es.success_.prev_fitness = std::move(prev);
  return es;
}

RunTrace lmcma_optimize(const ObjectiveProblem& problem, const LmCmaParams& params, const Vector& mean0,
                        double sigma0, SeededRng rng, const Termination& termination, const RunOptions& options) {
  if (problem.dimension != params.n) throw std::invalid_argument("lmcma_optimize: dimension mismatch");
  LmCmaEs es(params, mean0, sigma0, std::move(rng));
  return run(es, problem, termination, options);
}

}  // namespace lmcma
