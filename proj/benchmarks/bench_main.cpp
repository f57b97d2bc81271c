#include <benchmark/benchmark.h>

#include <map>

#include "l1ksvm/dataio.hpp"
#include "l1ksvm/ksvm.hpp"
#include "l1ksvm/lasso.hpp"
#include "l1ksvm/pipeline.hpp"
#include "l1ksvm/stability.hpp"
#include "l1ksvm/synthbench.hpp"

using namespace l1ksvm;

namespace {

// One training draw from the default benchmark, class_1 vs class_2.
const ExpressionMatrix& training_draw(std::size_t per_class) {
  static const auto pool = make_scenario(generate_benchmark(BenchmarkSpec{}), "class_1", "class_2");
  static std::map<std::size_t, ExpressionMatrix> cache;
  auto it = cache.find(per_class);
  if (it == cache.end()) it = cache.emplace(per_class, split_train_test(pool, per_class, 7).train).first;
  return it->second;
}

void BM_LassoFit(benchmark::State& state) {
  const auto& train = training_draw(static_cast<std::size_t>(state.range(0)));
  LassoParams p;
  p.inverse_reg_c = state.range(1) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lasso(train, p));
}
BENCHMARK(BM_LassoFit)->Args({10, 1})->Args({100, 1})->Args({250, 1})->Args({100, 100})->Unit(benchmark::kMillisecond);

void BM_Gram(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(n, 50);
  KernelParams k;
  k.gamma = 0.02;
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(x, k));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNSquared);

void BM_KsvmFit(benchmark::State& state) {
  const auto& train = training_draw(static_cast<std::size_t>(state.range(0)));
  std::vector<std::size_t> subset(30);
  for (std::size_t j = 0; j < subset.size(); ++j) subset[j] = j * 37;
  for (auto _ : state) benchmark::DoNotOptimize(fit_ksvm(train, {}, subset));
}
BENCHMARK(BM_KsvmFit)->Arg(25)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_StabilitySelection(benchmark::State& state) {
  const auto& train = training_draw(static_cast<std::size_t>(state.range(0)));
  const auto cfg = MethodConfig::defaults(Method::l1ksvm_aug);
  for (auto _ : state) benchmark::DoNotOptimize(run_stability_selection(train, cfg.lasso, cfg.stability, 3));
}
BENCHMARK(BM_StabilitySelection)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainPipeline(benchmark::State& state) {
  const auto& train = training_draw(100);
  const auto cfg = MethodConfig::defaults(static_cast<Method>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_pipeline(train, cfg, 5));
}
BENCHMARK(BM_TrainPipeline)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
