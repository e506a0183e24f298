#include <benchmark/benchmark.h>

#include "morse2d/jets.hpp"
#include "morse2d/profile.hpp"

using namespace morse2d;

namespace {

void BM_AnalyticJetOrder6(benchmark::State& state) {
  const double P = bessel_j1_first_zero();
  const FieldExpr e = FieldExpr::radial(Profile::bessel_j0, 0.0, P);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jet_analytic(e, {0, 0}, 6));
  }
}
BENCHMARK(BM_AnalyticJetOrder6);

void BM_NumericJetOrder4(benchmark::State& state) {
  const double P = bessel_j1_first_zero();
  FieldDomain dom;
  dom.box = {-8, -8, 8, 8};
  ExprField u(FieldExpr::radial(Profile::bessel_j0, 0.0, P), dom);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jet_numeric(u, {0, 0}, 4));
  }
}
BENCHMARK(BM_NumericJetOrder4);

void BM_ExactJetOrder6(benchmark::State& state) {
  Poly2 u = Poly2::constant(Rational(1, 10000));
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(3, false);
  u = u - harmonic_basis(4, false).scaled(Rational(18));
  for (auto _ : state) {
    benchmark::DoNotOptimize(jet_exact(u, {0, 0}, 6));
  }
}
BENCHMARK(BM_ExactJetOrder6);

}  // namespace
