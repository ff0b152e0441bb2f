#include "lmcma/cholesky_cma.hpp"
#include "lmcma/direction_store.hpp"
#include "lmcma/lm_cma.hpp"
#include "lmcma/problems.hpp"
#include "lmcma/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace lmcma;

namespace {

DirectionStore filled_store(std::size_t m, std::size_t n) {
  SeededRng rng(1);
  DirectionStore store(m, n);
  for (std::size_t t = 0; t < m; ++t) {
    const Vector p = sample_standard_normal_vector(rng, n);
    const Vector v = sample_standard_normal_vector(rng, n);
    const double u = v.squaredNorm();
    store.write(store.update_set(static_cast<std::int64_t>(t), static_cast<std::int64_t>(m)), p, v,
                forward_coefficient(0.1, u), inverse_coefficient(0.1, u));
  }
  return store;
}

void BM_Az(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t m = default_lambda(n);
  const DirectionStore store = filled_store(m, n);
  SeededRng rng(2);
  const Vector z = sample_standard_normal_vector(rng, n);
  Vector out(z.size());
  for (auto _ : state) {
    store.az_into(z, out, 0.95);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Az)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

void BM_Ainvz(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DirectionStore store = filled_store(default_lambda(n), n);
  SeededRng rng(2);
  const Vector z = sample_standard_normal_vector(rng, n);
  Vector x(z.size());
  for (auto _ : state) {
    x = z;
    store.ainvz_inplace(x, 1.05);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Ainvz)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

void BM_DenseFactorTimesVector(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix a = Matrix::Random(n, n);
  const Vector z = Vector::Random(n);
  Vector out(n);
  for (auto _ : state) {
    out.noalias() = a * z;
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseFactorTimesVector)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_RankOneFactorPair(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix a = Matrix::Identity(n, n), a_inv = Matrix::Identity(n, n);
  SeededRng rng(3);
  const Vector p = sample_standard_normal_vector(rng, static_cast<std::size_t>(n));
  Vector scratch(n);
  for (auto _ : state) {
    const Vector v = a_inv * p;
    rank_one_update_factor_inplace(a, p, v, 1e-6);
    rank_one_update_inverse_inplace(a_inv, v, 1e-6, scratch);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RankOneFactorPair)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_NormalVector(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SeededRng rng(4);
  Vector z(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    rng.fill_normal({z.data(), n});
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_NormalVector)->Range(128, 8192);

void BM_LmCmaGeneration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problem = problems::make_problem(problems::Function::Sphere, n);
  LmCmaEs es(LmCmaParams::defaults(n), Vector::Ones(static_cast<Eigen::Index>(n)), 1.0, SeededRng(5));
  std::vector<double> f(es.population_size());
  for (auto _ : state) {
    const RowMatrix& x = es.ask();
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = problem({x.row(static_cast<Eigen::Index>(k)).data(), n});
    es.tell(f);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LmCmaGeneration)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

}  // namespace

BENCHMARK_MAIN();
