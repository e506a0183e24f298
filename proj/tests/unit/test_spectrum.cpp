#include <cmath>
#include <doctest.h>

#include "morse2d/profile.hpp"
#include "morse2d/solve.hpp"
#include "morse2d/spectrum.hpp"

using namespace morse2d;

namespace {

SolveResult solve_square(const Nonlinearity& f, double h) {
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::rect;
  cfg.domain.box = {0, 0, 1, 1};
  cfg.h = h;
  cfg.f = f;
  return solve_dirichlet(cfg);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("unit square Dirichlet Laplacian eigenvalues pi^2 (i^2+j^2)") {
    const Nonlinearity f = Nonlinearity::constant(1.0);  // f' == 0
    const SolveResult sol = solve_square(f, 1.0 / 48);
    const SpectrumResult s = linearized_spectrum(sol.field, f, 4);
    REQUIRE(s.eigenvalues.size() == 4);
    const double pi2 = M_PI * M_PI;
    CHECK(s.eigenvalues[0] == doctest::Approx(2 * pi2).epsilon(0.01));
    CHECK(s.eigenvalues[1] == doctest::Approx(5 * pi2).epsilon(0.01));
    CHECK(s.eigenvalues[2] == doctest::Approx(5 * pi2).epsilon(0.01));
    CHECK(s.eigenvalues[3] == doctest::Approx(8 * pi2).epsilon(0.015));
    CHECK(s.morse_index == 0);
    CHECK(s.semi_stable);
    for (size_t k = 1; k < s.eigenvalues.size(); ++k)
      CHECK(s.eigenvalues[k] >= s.eigenvalues[k - 1]);
  }

  TEST_CASE("disk first eigenvalue equals the squared first J0 zero") {
    SolveConfig cfg;
    cfg.domain.kind = DomainSpec::Kind::level;
    cfg.domain.box = {-1.2, -1.2, 1.2, 1.2};
    cfg.domain.level = FieldExpr::parse_prefix("(+ (pow x 2) (pow y 2) -1)");
    cfg.h = 1.0 / 48;
    cfg.f = Nonlinearity::constant(1.0);
    const SolveResult sol = solve_dirichlet(cfg);
    const SpectrumResult s = linearized_spectrum(sol.field, cfg.f, 1);
    const double z = bessel_j0_first_zero();
    CHECK(s.eigenvalues[0] == doctest::Approx(z * z).epsilon(0.01));
    CHECK(s.morse_index == 0);
    CHECK(s.semi_stable);
  }

  TEST_CASE("a positive potential shifts the spectrum and breaks semi-stability") {
    const Nonlinearity f = Nonlinearity::parse("(scale 25 u)");  // f'(u) = 25
    const SolveResult sol = solve_square(f, 1.0 / 40);           // unique solution u = 0
    const SpectrumResult s = linearized_spectrum(sol.field, f, 3);
    const double pi2 = M_PI * M_PI;
    CHECK(s.eigenvalues[0] == doctest::Approx(2 * pi2 - 25).epsilon(0.05));
    CHECK(s.morse_index == 1);
    CHECK_FALSE(s.semi_stable);
    // internal consistency: m equals the count of negative entries
    int neg = 0;
    for (const double l : s.eigenvalues)
      if (l < 0) ++neg;
    CHECK(neg == s.morse_index);
  }
}
