#include <benchmark/benchmark.h>

#include "morse2d/poly2.hpp"

using namespace morse2d;

namespace {

Poly2 quartic_field() {
  Poly2 u = Poly2::constant(Rational(1, 200));
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(4, false);
  return u;
}

void BM_PolyEvalDouble(benchmark::State& state) {
  const Poly2 u = quartic_field();
  double x = 0.1, y = -0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(u.eval(x, y));
    x += 1e-9;
  }
}
BENCHMARK(BM_PolyEvalDouble);

void BM_PolyEvalExact(benchmark::State& state) {
  const Poly2 u = quartic_field();
  const Rational x(1, 10), y(-1, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(u.eval(x, y));
  }
}
BENCHMARK(BM_PolyEvalExact);

void BM_PolyRotate(benchmark::State& state) {
  const Poly2 u = quartic_field();
  const Rational c(3, 5), s(4, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(u.compose_linear(c, -s, s, c));
  }
}
BENCHMARK(BM_PolyRotate);

}  // namespace
