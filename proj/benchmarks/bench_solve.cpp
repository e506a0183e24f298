#include <benchmark/benchmark.h>

#include "morse2d/solve.hpp"
#include "morse2d/spectrum.hpp"

using namespace morse2d;

namespace {

void BM_TorsionSquare(benchmark::State& state) {
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::rect;
  cfg.domain.box = {0, 0, 1, 1};
  cfg.h = 1.0 / double(state.range(0));
  cfg.f = Nonlinearity::constant(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dirichlet(cfg));
  }
}
BENCHMARK(BM_TorsionSquare)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DiskEigenvalue(benchmark::State& state) {
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::level;
  cfg.domain.box = {-1.2, -1.2, 1.2, 1.2};
  cfg.domain.level = FieldExpr::parse_prefix("(+ (pow x 2) (pow y 2) -1)");
  cfg.h = 1.0 / 32;
  cfg.f = Nonlinearity::constant(1.0);
  const SolveResult sol = solve_dirichlet(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearized_spectrum(sol.field, cfg.f, 1));
  }
}
BENCHMARK(BM_DiskEigenvalue)->Unit(benchmark::kMillisecond);

}  // namespace
