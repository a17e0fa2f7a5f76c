#include <benchmark/benchmark.h>

#include "aenmf/admm.hpp"
#include "aenmf/log.hpp"
#include "aenmf/synth.hpp"

using namespace aenmf;

namespace {

void BM_Fit(benchmark::State& state) {
  log::set_quiet(true);
  const Dataset data = generate(complementary_spec({60, 40}, static_cast<int>(state.range(0)), 1.0, 0));
  AdmmConfig cfg;
  cfg.tol = 0.0;
  cfg.max_iters = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fit(data.modalities, {20, 8}, cfg, {}, 0));
}
BENCHMARK(BM_Fit)->Args({30, 50})->Args({100, 150})->Unit(benchmark::kMillisecond);

void BM_Pretrain(benchmark::State& state) {
  log::set_quiet(true);
  const Dataset data = generate(complementary_spec({60, 40}, 100, 1.0, 0));
  AdmmConfig cfg;
  cfg.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fit(data.modalities, {20, 8}, cfg, {}, 0));
}
BENCHMARK(BM_Pretrain)->Unit(benchmark::kMillisecond);

}  // namespace
