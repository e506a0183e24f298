#include <benchmark/benchmark.h>

#include "morse2d/winding.hpp"

using namespace morse2d;

namespace {

void BM_GradientIndex(benchmark::State& state) {
  FieldDomain dom;
  dom.box = {-1, -1, 1, 1};
  PolyField u(harmonic_basis(5, false), dom);
  const int m = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_index(u, {0, 0}, 0.2, m));
  }
}
BENCHMARK(BM_GradientIndex)->Arg(64)->Arg(256)->Arg(1024);

void BM_RobustIndex(benchmark::State& state) {
  FieldDomain dom;
  dom.box = {-1, -1, 1, 1};
  PolyField u(harmonic_basis(4, false), dom);
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust_index(u, {0, 0}));
  }
}
BENCHMARK(BM_RobustIndex);

}  // namespace
