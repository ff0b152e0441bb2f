#include "lmcma/direction_store.hpp"
#include "lmcma/rng.hpp"

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace lmcma;

namespace {

// Dense factor accumulated over the stored pairs, oldest first:
// A_0 = I, A_k = a A_{k-1} + b_k p_k v_k^T.
Matrix dense_factor(const DirectionStore& store, double a) {
  const auto n = static_cast<Eigen::Index>(store.dimension());
  Matrix m = Matrix::Identity(n, n);
  for (std::size_t row : store.order()) {
    m = a * m + store.forward(row) * store.path(row).transpose() * store.dual(row);
  }
  return m;
}

// Dense inverse factor: (c I - d_k v_k v_k^T) ... (c I - d_1 v_1 v_1^T).
Matrix dense_inverse(const DirectionStore& store, double c) {
  const auto n = static_cast<Eigen::Index>(store.dimension());
  Matrix m = Matrix::Identity(n, n);
  for (std::size_t row : store.order()) {
    const Vector v = store.dual(row).transpose();
    m = (c * Matrix::Identity(n, n) - store.inverse(row) * v * v.transpose()) * m;
  }
  return m;
}

// Fills a store of the given count with random pairs. Extra insertions
// recycle slots, so the physical row order differs from the logical one.
DirectionStore random_store(SeededRng& rng, std::size_t n, std::size_t count, double c1) {
  DirectionStore store(count, n);
  const std::size_t insertions = count + static_cast<std::size_t>(rng.uniform() * 2 * count);
  for (std::size_t t = 0; t < insertions; ++t) {
    const std::size_t row = store.update_set(static_cast<std::int64_t>(t), 3);
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = sample_standard_normal_vector(rng, n);
    const double u = v.squaredNorm();
    store.write(row, p, v, forward_coefficient(c1, u), inverse_coefficient(c1, u));
  }
  return store;
}

}  // namespace

TEST(Coefficients, ForwardExample) {
  EXPECT_NEAR(forward_coefficient(0.75, 1.0), 0.5, 1e-15);
  // Sherman-Morrison pairing: c b - d (a + b u) = 0.
  for (double u : {0.01, 0.5, 1.0, 7.0, 100.0}) {
    const double c1 = 0.1;
    const double a = std::sqrt(1 - c1), c = 1 / a;
    const double b = forward_coefficient(c1, u), d = inverse_coefficient(c1, u);
    EXPECT_NEAR(c * b - d * (a + b * u), 0.0, 1e-14);
    EXPECT_GT(b, 0.0);
    EXPECT_GT(d, 0.0);
  }
}

TEST(DirectionStoreAz, EmptyIsIdentity) {
  DirectionStore store(4, 3);
  const Vector z = Vector::LinSpaced(3, -1, 2);
  EXPECT_EQ(store.az(z, 0.9), z);
  EXPECT_EQ(store.ainvz(z, 1.1), z);
}

TEST(DirectionStoreAz, SinglePairExample) {
  DirectionStore store(2, 2);
  const std::size_t row = store.update_set(0, 2);
  store.write(row, Vector::Unit(2, 0), Vector::Unit(2, 0), 0.5, 0.0);
  const Vector x = store.az(Vector::Ones(2), 0.9);
  EXPECT_NEAR(x[0], 1.4, 1e-15);
  EXPECT_NEAR(x[1], 0.9, 1e-15);
}

TEST(DirectionStoreAinvz, SinglePairExample) {
  DirectionStore store(2, 2);
  const std::size_t row = store.update_set(0, 2);
  store.write(row, Vector::Zero(2), Vector::Unit(2, 1), 0.0, 0.2);
  Vector z(2);
  z << 3, 4;
  const Vector x = store.ainvz(z, 1.0);
  EXPECT_NEAR(x[0], 3.0, 1e-15);
  EXPECT_NEAR(x[1], 3.2, 1e-15);
}

TEST(DirectionStoreAz, MatchesDenseOracle) {
  SeededRng rng(101);
  for (std::size_t n : {2, 4, 8, 16}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform() * 8);
      const double c1 = rng.uniform(0.01, 0.5);
      const double a = std::sqrt(1 - c1);
      const DirectionStore store = random_store(rng, n, count, c1);
      const Vector z = sample_standard_normal_vector(rng, n);
      const Vector expect = dense_factor(store, a) * z;
      EXPECT_LE((store.az(z, a) - expect).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " count=" << count;
    }
  }
}

TEST(DirectionStoreAinvz, MatchesDenseOracle) {
  SeededRng rng(202);
  for (std::size_t n : {2, 4, 8, 16}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform() * 8);
      const double c1 = rng.uniform(0.01, 0.5);
      const double c = 1 / std::sqrt(1 - c1);
      const DirectionStore store = random_store(rng, n, count, c1);
      const Vector z = sample_standard_normal_vector(rng, n);
      const Vector expect = dense_inverse(store, c) * z;
      EXPECT_LE((store.ainvz(z, c) - expect).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " count=" << count;
    }
  }
}

TEST(DirectionStore, SinglePipelinePairRoundTrip) {
  SeededRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 20);
    const double c1 = rng.uniform(0.01, 0.5);
    const double a = std::sqrt(1 - c1), c = 1 / a;
    DirectionStore store(4, n);
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = store.ainvz(p, c);  // empty store: v = p
    EXPECT_EQ(v, p);
    const double u = v.squaredNorm();
    store.write(store.update_set(0, 4), p, v, forward_coefficient(c1, u), inverse_coefficient(c1, u));
    const Vector z = sample_standard_normal_vector(rng, n);
    EXPECT_LE((store.ainvz(store.az(z, a), c) - z).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DirectionStore, PipelineChainRoundTrip) {
  SeededRng rng(8);
  const std::size_t n = 12;
  const double c1 = 0.2;
  const double a = std::sqrt(1 - c1), c = 1 / a;
  DirectionStore store(6, n);
  for (int t = 0; t < 6; ++t) {
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = store.ainvz(p, c);
    const double u = v.squaredNorm();
    store.write(store.update_set(t, 6), p, v, forward_coefficient(c1, u), inverse_coefficient(c1, u));
    const Vector z = sample_standard_normal_vector(rng, n);
    EXPECT_LE((store.ainvz(store.az(z, a), c) - z).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((store.az(store.ainvz(z, c), a) - z).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(DirectionStore, RotatedPairsCommuteWithRotation) {
  SeededRng rng(31);
  const std::size_t n = 10;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  DirectionStore plain(5, n), rotated(5, n);
  for (int t = 0; t < 5; ++t) {
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = sample_standard_normal_vector(rng, n);
    const double u = v.squaredNorm();
    plain.write(plain.update_set(t, 5), p, v, forward_coefficient(0.1, u), inverse_coefficient(0.1, u));
    rotated.write(rotated.update_set(t, 5), q * p, q * v, forward_coefficient(0.1, u), inverse_coefficient(0.1, u));
  }
  const Vector z = sample_standard_normal_vector(rng, n);
  const double a = std::sqrt(0.9);
  EXPECT_LE((rotated.az(q * z, a) - q * plain.az(z, a)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((rotated.ainvz(q * z, 1 / a) - q * plain.ainvz(z, 1 / a)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(UpdateSet, FirstCall) {
  DirectionStore store(4, 2);
  EXPECT_EQ(store.update_set(0, 4), 0u);
  ASSERT_EQ(store.size(), 1u);
  EXPECT_EQ(store.order()[0], 0u);
  EXPECT_EQ(store.stamp(0), 0);
}

TEST(UpdateSet, ReplacesNewerOfClosestPair) {
  DirectionStore store(4, 2);
  for (int t = 0; t < 4; ++t) store.update_set(t, 4);
  EXPECT_EQ(store.update_set(4, 4), 1u);
  const std::vector<std::size_t> order(store.order().begin(), store.order().end());
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 2, 3, 1}));
  EXPECT_EQ(store.stamp(1), 4);
}

TEST(UpdateSet, ReplacesOldestWhenSpreadEnough) {
  DirectionStore store(4, 2);
  for (int t : {0, 5, 10, 15}) store.update_set(t, 4);
  EXPECT_EQ(store.update_set(4, 4), 0u);
  const std::vector<std::size_t> order(store.order().begin(), store.order().end());
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 3, 0}));
  EXPECT_EQ(store.stamp(0), 4);
}

TEST(UpdateSet, RandomSequencesKeepValidOrder) {
  SeededRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 10);
    const auto n_steps = static_cast<std::int64_t>(1 + rng.uniform() * 12);
    DirectionStore store(m, 1);
    std::int64_t t = 0;
    const std::size_t calls = static_cast<std::size_t>(rng.uniform() * 60);
    for (std::size_t i = 0; i < calls; ++i) {
      t += 1 + static_cast<std::int64_t>(rng.uniform() * 3);
      const std::size_t row = store.update_set(t, n_steps);
      EXPECT_EQ(row, store.order().back());
      EXPECT_LT(row, m);
    }
    EXPECT_EQ(store.size(), std::min(calls, m));
    const std::set<std::size_t> unique(store.order().begin(), store.order().end());
    EXPECT_EQ(unique.size(), store.size());
    for (std::size_t i = 1; i < store.size(); ++i) {
      EXPECT_LT(store.stamp(store.order()[i - 1]), store.stamp(store.order()[i]));
    }
  }
}

TEST(DirectionStore, WriteRequiresValidSlot) {
  DirectionStore store(3, 2);
  EXPECT_THROW(store.write(0, Vector::Zero(2), Vector::Zero(2), 0, 0), std::out_of_range);
  store.update_set(0, 3);
  EXPECT_THROW(store.write(0, Vector::Zero(3), Vector::Zero(2), 0, 0), std::invalid_argument);
  EXPECT_THROW(DirectionStore(0, 2), std::invalid_argument);
}

TEST(DirectionStore, SaveLoadRoundTrip) {
  SeededRng rng(5);
  const DirectionStore store = random_store(rng, 7, 5, 0.1);
  std::stringstream ss;
  store.save(ss);
  const DirectionStore back = DirectionStore::load(ss);
  ASSERT_EQ(back.size(), store.size());
  const Vector z = sample_standard_normal_vector(rng, 7);
  EXPECT_EQ(back.az(z, 0.9), store.az(z, 0.9));
  EXPECT_EQ(back.ainvz(z, 1.1), store.ainvz(z, 1.1));
}

TEST(DirectionStore, MemoryIsLinearInDimension) {
  const DirectionStore small(10, 1000), large(10, 4000);
  const double ratio = static_cast<double>(large.bytes()) / static_cast<double>(small.bytes());
  EXPECT_NEAR(ratio, 4.0, 0.05);
  EXPECT_GE(small.bytes(), 2 * 10 * 1000 * sizeof(double));
}
