#include <benchmark/benchmark.h>

#include <random>

#include "aenmf/dense.hpp"
#include "aenmf/graph.hpp"
#include "aenmf/multiplicative.hpp"
#include "aenmf/spectral.hpp"

using namespace aenmf;

namespace {

Matrix uniform(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
  return m;
}

Matrix spd(Eigen::Index n, std::uint64_t seed) {
  const Matrix g = uniform(n, n, seed);
  Matrix s = g.transpose() * g / static_cast<double>(n);
  s.diagonal().array() += 0.1;
  return s;
}

void BM_SolveSylvester(benchmark::State& state) {
  const auto p = state.range(0), n = state.range(1);
  const Matrix a = spd(p, 1), b = spd(n, 2), c = uniform(p, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester(a, b, c));
}
BENCHMARK(BM_SolveSylvester)->Args({8, 100})->Args({8, 300})->Args({50, 300})->Unit(benchmark::kMillisecond);

void BM_Pinv(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix m = uniform(n, 3 * n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(pinv(m));
}
BENCHMARK(BM_Pinv)->Arg(8)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_SymEig(benchmark::State& state) {
  const Matrix s = spd(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(s));
}
BENCHMARK(BM_SymEig)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_MultiplicativeZ(benchmark::State& state) {
  const auto d = state.range(0), p = state.range(1), n = state.range(2);
  const Matrix x = uniform(d, n, 6), z = uniform(d, p, 7), h = uniform(p, n, 8);
  const Matrix eye = Matrix::Identity(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(multiplicative_z(x, eye, z, h, 1.0, 1e-12));
}
BENCHMARK(BM_MultiplicativeZ)->Args({60, 20, 300})->Args({500, 100, 1000})->Unit(benchmark::kMillisecond);

void BM_MultiplicativeH(benchmark::State& state) {
  const auto d = state.range(0), p = state.range(1), n = state.range(2);
  const Matrix x = uniform(d, n, 9), phi = uniform(d, p, 10), h = uniform(p, n, 11);
  const Matrix ptx = phi.transpose() * x, ptp = phi.transpose() * phi;
  for (auto _ : state) benchmark::DoNotOptimize(multiplicative_h(ptx, ptp, h, 1.0, 1e-12));
}
BENCHMARK(BM_MultiplicativeH)->Args({60, 20, 300})->Args({500, 100, 1000})->Unit(benchmark::kMillisecond);

void BM_GraphPrior(benchmark::State& state) {
  const Matrix x = uniform(40, state.range(0), 12);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_prior(x, {}));
}
BENCHMARK(BM_GraphPrior)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SpectralCluster(benchmark::State& state) {
  const Matrix h = uniform(8, state.range(0), 13);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_cluster(h, 3, {}, 0));
}
BENCHMARK(BM_SpectralCluster)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
