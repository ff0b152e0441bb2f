#include "lmcma/cholesky_cma.hpp"
#include "lmcma/driver.hpp"
#include "lmcma/problems.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>

using namespace lmcma;

namespace {

Matrix random_factor(SeededRng& rng, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) += 0.3 * rng.normal();
  }
  return a;
}

}  // namespace

TEST(CholeskyParams, Defaults) {
  const auto p = CholeskyParams::defaults(100);
  const double mu_w = p.weights.mu_w;
  EXPECT_EQ(p.lambda, default_lambda(100));
  EXPECT_DOUBLE_EQ(p.c_sigma, std::sqrt(mu_w) / (10.0 + std::sqrt(mu_w)));
  EXPECT_DOUBLE_EQ(p.c_c, 4.0 / 104.0);
  EXPECT_DOUBLE_EQ(p.c_1, 2.0 / std::pow(100.0 + std::sqrt(2.0), 2));
  EXPECT_GE(p.d_sigma, 1.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(RankOneFactor, ZeroDirectionScales) {
  SeededRng rng(1);
  const Matrix a = random_factor(rng, 5);
  const Matrix out = rank_one_update_factor(a, Vector::Zero(5), Vector::Zero(5), 0.2);
  EXPECT_LE((out - std::sqrt(0.8) * a).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix inv = rank_one_update_inverse(a, Vector::Zero(5), 0.2);
  EXPECT_LE((inv - a / std::sqrt(0.8)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RankOneFactor, IdentityExample) {
  const std::size_t n = 4;
  const Vector e1 = Vector::Unit(n, 0);
  const Matrix a = rank_one_update_factor(Matrix::Identity(n, n), e1, e1, 0.75);
  Vector diag(n);
  diag << 1.0, 0.5, 0.5, 0.5;
  EXPECT_LE((a - Matrix(diag.asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix c = 0.25 * Matrix::Identity(n, n) + 0.75 * e1 * e1.transpose();
  EXPECT_LE((a * a.transpose() - c).cwiseAbs().maxCoeff(), 1e-14);
  const Matrix inv = rank_one_update_inverse(Matrix::Identity(n, n), e1, 0.75);
  EXPECT_LE((a * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(RankOneFactor, CovarianceIdentity) {
  SeededRng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 31);
    const double c1 = rng.uniform(0.001, 0.5);
    const Matrix a = random_factor(rng, n);
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = a.partialPivLu().solve(p);
    const Matrix out = rank_one_update_factor(a, p, v, c1);
    const Matrix expect = (1 - c1) * a * a.transpose() + c1 * p * p.transpose();
    EXPECT_LE((out * out.transpose() - expect).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
  }
}

TEST(RankOneFactor, InverseStaysInverseOver1000Updates) {
  SeededRng rng(3);
  for (std::size_t n : {5, 10, 32}) {
    const auto k = static_cast<Eigen::Index>(n);
    Matrix a = Matrix::Identity(k, k), a_inv = Matrix::Identity(k, k);
    const double c1 = 2.0 / std::pow(static_cast<double>(n) + std::sqrt(2.0), 2);
    Vector scratch(k);
    Vector p_c = Vector::Zero(k);
    for (int g = 0; g < 1000; ++g) {
      // A smoothed path, as produced by the optimizer.
      p_c = 0.8 * p_c + 0.6 * sample_standard_normal_vector(rng, n);
      const Vector v = a_inv * p_c;
      rank_one_update_factor_inplace(a, p_c, v, c1);
      rank_one_update_inverse_inplace(a_inv, v, c1, scratch);
    }
    EXPECT_LE((a * a_inv - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-6) << "n=" << n;
  }
}

TEST(CholeskyCmaEs, FirstSampleIsIsotropic) {
  CholeskyCmaEs es(CholeskyParams::defaults(6), Vector::Constant(6, -1.0), 0.5, SeededRng(9));
  SeededRng twin(9);
  const RowMatrix& x = es.ask();
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    const Vector z = sample_standard_normal_vector(twin, 6);
    EXPECT_LE((x.row(k).transpose() - (Vector::Constant(6, -1.0) + 0.5 * z)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(CholeskyCmaEs, SphereRegression) {
  SeededRng rng(3);
  Vector mean(16);
  for (Eigen::Index i = 0; i < 16; ++i) mean[i] = rng.uniform(-5.0, 5.0);
  CholeskyCmaEs es(CholeskyParams::defaults(16), mean, 5.0, std::move(rng));
  Termination term;
  term.max_evaluations = 6000;
  const auto trace = run(es, problems::make_problem(problems::Function::Sphere, 16), term);
  EXPECT_EQ(trace.final_status, RunStatus::TargetReached);
  EXPECT_LE(trace.evaluations, 6000u);
}

TEST(CholeskyCmaEs, FactorTracksInverseDuringRun) {
  SeededRng rng(4);
  CholeskyCmaEs es(CholeskyParams::defaults(20), Vector::Constant(20, 1.0), 1.0, std::move(rng));
  const auto problem = problems::make_problem(problems::Function::Ellipsoid, 20);
  Termination term;
  term.max_evaluations = 20'000;
  run(es, problem, term);
  EXPECT_GT(es.iteration(), 100u);
  EXPECT_LE((es.factor() * es.inverse_factor() - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CholeskyCmaEs, DimensionGuard) {
  const std::size_t n = kMaxCholeskyDimension + 1;
  EXPECT_THROW(CholeskyCmaEs(CholeskyParams::defaults(n), Vector::Zero(static_cast<Eigen::Index>(n)), 1.0, SeededRng(1)),
               std::invalid_argument);
}

TEST(CholeskyCmaEs, StateIsQuadratic) {
  const CholeskyCmaEs es(CholeskyParams::defaults(64), Vector::Zero(64), 1.0, SeededRng(1));
  EXPECT_GE(es.state_bytes(), 2u * 64u * 64u * sizeof(double));
}
