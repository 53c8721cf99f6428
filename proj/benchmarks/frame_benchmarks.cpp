#include <benchmark/benchmark.h>

#include "csf/equivalence.hpp"
#include "csf/random.hpp"

namespace {

using namespace csf;

const AlgebraSpec& bench_spec() {
  static const AlgebraSpec spec({1, 2, 3});
  return spec;
}

void BM_Flatten(benchmark::State& state) {
  Rng rng(42);
  const int n = static_cast<int>(state.range(0));
  const ModuleOperator op = random_operator(rng, bench_spec(), n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatten(op));
  }
}
BENCHMARK(BM_Flatten)->Arg(2)->Arg(4)->Arg(6);

void BM_Analyze(benchmark::State& state) {
  Rng rng(43);
  const int n = static_cast<int>(state.range(0));
  const OperatorFrame f = random_frame(rng, bench_spec(), n, n + 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(f));
  }
}
BENCHMARK(BM_Analyze)->Arg(2)->Arg(4)->Arg(6);

void BM_PositivePower(benchmark::State& state) {
  Rng rng(44);
  const int n = static_cast<int>(state.range(0));
  const ModuleOperator d =
      frame_operator(random_frame(rng, bench_spec(), n, n + 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(positive_power(d, -0.5));
  }
}
BENCHMARK(BM_PositivePower)->Arg(2)->Arg(4)->Arg(6);

void BM_DetectRightSimilarity(benchmark::State& state) {
  Rng rng(45);
  const int n = static_cast<int>(state.range(0));
  const OperatorFrame f = random_frame(rng, bench_spec(), n, n + 2);
  const OperatorFrame g =
      right_transform(f, random_invertible(rng, bench_spec(), n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_right_similarity(f, g));
  }
}
BENCHMARK(BM_DetectRightSimilarity)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
