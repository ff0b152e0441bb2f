#include "lmcma/driver.hpp"
#include "lmcma/problems.hpp"
#include "lmcma/sep_cma.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace lmcma;

TEST(SepParams, Defaults) {
  const auto p = SepParams::defaults(50);
  const double mu_w = p.weights.mu_w;
  EXPECT_DOUBLE_EQ(p.c_sigma, (mu_w + 2.0) / (50.0 + mu_w + 3.0));
  EXPECT_DOUBLE_EQ(p.c_c, 4.0 / 54.0);
  EXPECT_DOUBLE_EQ(p.mu_cov, mu_w);
  EXPECT_GT(p.c_cov, 0.0);
  EXPECT_LT(p.c_cov, 1.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(SepDiagUpdate, ZeroRateKeepsDiagonal) {
  SeededRng rng(1);
  const Vector c = Vector::LinSpaced(4, 0.5, 2.0);
  RowMatrix z(2, 4);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  const std::vector<double> w{0.7, 0.3};
  EXPECT_EQ(sep_diag_update(c, Vector::Ones(4), z, w, 0.0, 1.5), c);
}

TEST(SepDiagUpdate, UnitSquaresAndZeroPath) {
  const std::size_t n = 5;
  RowMatrix z(3, n);
  z.setConstant(1.0);
  z.row(1).setConstant(-1.0);
  const std::vector<double> w{0.5, 0.3, 0.2};
  const double c_cov = 0.1, mu_cov = 2.5;
  const Vector out = sep_diag_update(Vector::Ones(n), Vector::Zero(n), z, w, c_cov, mu_cov);
  for (Eigen::Index j = 0; j < out.size(); ++j) EXPECT_NEAR(out[j], 1.0 - c_cov / mu_cov, 1e-15);
}

TEST(SepDiagUpdate, Stationarity) {
  // (p_c)_j^2 = c_jj and sum_i w_i z_ij^2 = 1 leave the diagonal unchanged.
  const Vector c = Vector::LinSpaced(6, 0.25, 4.0);
  const Vector p = c.cwiseSqrt();
  RowMatrix z(2, 6);
  z.setConstant(1.0);
  const std::vector<double> w{0.6, 0.4};
  const Vector out = sep_diag_update(c, p, z, w, 0.3, 1.7);
  EXPECT_LE((out - c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SepDiagUpdate, PermutationEquivariant) {
  SeededRng rng(5);
  const std::size_t n = 9;
  Vector c(n), p(n);
  RowMatrix z(3, n);
  for (std::size_t j = 0; j < n; ++j) {
    c[static_cast<Eigen::Index>(j)] = rng.uniform(0.1, 3.0);
    p[static_cast<Eigen::Index>(j)] = rng.normal();
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[0], perm[4]);
  Vector cp(n), pp(n);
  RowMatrix zp(3, n);
  for (std::size_t j = 0; j < n; ++j) {
    cp[static_cast<Eigen::Index>(j)] = c[perm[j]];
    pp[static_cast<Eigen::Index>(j)] = p[perm[j]];
    zp.col(static_cast<Eigen::Index>(j)) = z.col(perm[j]);
  }
  const std::vector<double> w{0.5, 0.3, 0.2};
  const Vector out = sep_diag_update(c, p, z, w, 0.2, 2.0);
  const Vector outp = sep_diag_update(cp, pp, zp, w, 0.2, 2.0);
  for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(outp[static_cast<Eigen::Index>(j)], out[perm[j]]);
}

TEST(SepDiagUpdate, NonPositiveIsFailure) {
  RowMatrix z = RowMatrix::Zero(1, 2);
  const std::vector<double> w{1.0};
  EXPECT_THROW(sep_diag_update(Vector::Ones(2), Vector::Zero(2), z, w, 1.0, 1.0), NumericalFailure);
}

TEST(SepCmaEs, FirstSampleIsIsotropic) {
  SepCmaEs es(SepParams::defaults(6), Vector::Constant(6, 3.0), 0.5, SeededRng(9));
  SeededRng twin(9);
  const RowMatrix& x = es.ask();
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    const Vector z = sample_standard_normal_vector(twin, 6);
    EXPECT_LE((x.row(k).transpose() - (Vector::Constant(6, 3.0) + 0.5 * z)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SepCmaEs, SeparableEllipsoid) {
  SeededRng rng(1);
  Vector mean(32);
  for (Eigen::Index i = 0; i < 32; ++i) mean[i] = rng.uniform(-5.0, 5.0);
  SepCmaEs es(SepParams::defaults(32), mean, 5.0, std::move(rng));
  Termination term;
  term.max_evaluations = 100'000;
  const auto trace = run(es, problems::make_problem(problems::Function::Ellipsoid, 32), term);
  EXPECT_EQ(trace.final_status, RunStatus::TargetReached);
  // The learned scaling follows the ellipsoid's axis weights.
  EXPECT_GT(es.diagonal()[0] / es.diagonal()[31], 1e4);
  EXPECT_GT((es.diagonal().array() > 0.0).count(), 31);
}

TEST(SepCmaEs, StateIsLinear) {
  const SepCmaEs small(SepParams::defaults(1000), Vector::Zero(1000), 1.0, SeededRng(1));
  const SepCmaEs large(SepParams::defaults(2000), Vector::Zero(2000), 1.0, SeededRng(1));
  EXPECT_LT(large.state_bytes(), 3 * small.state_bytes());
}
