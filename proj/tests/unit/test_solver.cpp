#include <cmath>
#include <doctest.h>
#include <sstream>

#include "morse2d/errors.hpp"
#include "morse2d/scalar_field.hpp"
#include "morse2d/solve.hpp"

using namespace morse2d;

namespace {

SolveConfig torsion_square(double h) {
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::rect;
  cfg.domain.box = {0, 0, 1, 1};
  cfg.h = h;
  cfg.f = Nonlinearity::constant(1.0);
  return cfg;
}

Poly2 example41_poly(const Rational& abar) {
  Poly2 u = Poly2::constant(abar);
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(4, false);
  return u;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("torsion problem on the unit square") {
    const SolveResult res = solve_dirichlet(torsion_square(1.0 / 64));
    CHECK(res.residual_maxnorm <= 1e-10);
    const GridField& g = res.field;
    const int n = g.nx() - 1;

    // discrete maximum principle: nonnegative everywhere
    double umax = 0;
    int imax = 0, jmax = 0;
    for (const auto& [i, j] : g.interior_nodes()) {
      CHECK(g.value(i, j) >= 0.0);
      if (g.value(i, j) > umax) {
        umax = g.value(i, j);
        imax = i;
        jmax = j;
      }
    }
    CHECK(imax == n / 2);
    CHECK(jmax == n / 2);

    // invariance under the 8-element symmetry group of the square
    double dev = 0;
    for (const auto& [i, j] : g.interior_nodes()) {
      const double v = g.value(i, j);
      dev = std::max(dev, std::abs(v - g.value(n - i, j)));
      dev = std::max(dev, std::abs(v - g.value(i, n - j)));
      dev = std::max(dev, std::abs(v - g.value(j, i)));
      dev = std::max(dev, std::abs(v - g.value(n - j, n - i)));
    }
    CHECK(dev <= 1e-12);

    // Hessian at the center: diagonal and strictly negative definite
    const double h = g.hx();
    const int c = n / 2;
    const double uxx = (g.value(c + 1, c) - 2 * g.value(c, c) + g.value(c - 1, c)) / (h * h);
    const double uyy = (g.value(c, c + 1) - 2 * g.value(c, c) + g.value(c, c - 1)) / (h * h);
    const double uxy =
        (g.value(c + 1, c + 1) - g.value(c + 1, c - 1) - g.value(c - 1, c + 1) + g.value(c - 1, c - 1)) /
        (4 * h * h);
    CHECK(uxx < 0.0);
    CHECK(uyy < 0.0);
    CHECK(std::abs(uxy) <= 1e-6 * std::abs(uxx));
  }

  TEST_CASE("zero data gives the zero field exactly") {
    SolveConfig cfg;
    cfg.domain.kind = DomainSpec::Kind::level;
    cfg.domain.box = {-1.2, -1.2, 1.2, 1.2};
    cfg.domain.level = FieldExpr::parse_prefix("(+ (pow x 2) (pow y 2) -1)");
    cfg.h = 1.0 / 24;
    cfg.f = Nonlinearity::constant(0.0);
    const SolveResult res = solve_dirichlet(cfg);
    CHECK(res.residual_maxnorm == 0.0);
    for (const auto& [i, j] : res.field.interior_nodes()) CHECK(res.field.value(i, j) == 0.0);
  }

  TEST_CASE("second order against the quartic closed form") {
    const Rational abar(1, 200);
    const Poly2 u = example41_poly(abar);
    FieldDomain dom;
    dom.box = {-0.4, -0.25, 0.4, 0.25};
    PolyField ref(u, dom);

    SolveConfig cfg;
    cfg.domain.kind = DomainSpec::Kind::level;
    cfg.domain.box = dom.box;
    // level function = -u; the interior is {u > 0}
    cfg.domain.level = FieldExpr::parse_prefix(
        "(+ -0.005 (scale 0.5 (pow y 2)) (pow x 4)"
        " (scale -6 (* (pow x 2) (pow y 2))) (pow y 4))");
    cfg.domain.seed = Vec2{0, 0};
    cfg.f = Nonlinearity::constant(1.0);

    const double hs[3] = {1.0 / 32, 1.0 / 64, 1.0 / 128};
    const OrderFit fit = convergence_order(cfg, ref, hs);
    REQUIRE_FALSE(fit.exact);
    CHECK(fit.order >= 1.5);
    CHECK(fit.order <= 2.5);
  }

  TEST_CASE("zero-data order test is reported exact") {
    SolveConfig cfg;
    cfg.domain.kind = DomainSpec::Kind::rect;
    cfg.domain.box = {0, 0, 1, 1};
    cfg.f = Nonlinearity::constant(0.0);
    FieldDomain dom;
    dom.box = {0, 0, 1, 1};
    PolyField zero(Poly2{}, dom);
    const double hs[3] = {1.0 / 8, 1.0 / 16, 1.0 / 32};
    const OrderFit fit = convergence_order(cfg, zero, hs);
    CHECK(fit.exact);
  }

  TEST_CASE("Richardson self-reference on the square") {
    const SolveResult fine = solve_dirichlet(torsion_square(1.0 / 256));
    GridBackedField ref(fine.field);
    const double hs[3] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    const OrderFit fit = convergence_order(torsion_square(1.0 / 16), ref, hs);
    REQUIRE_FALSE(fit.exact);
    CHECK(fit.order >= 1.5);
    CHECK(fit.order <= 2.5);
  }

  TEST_CASE("newton divergence is reported") {
    SolveConfig cfg = torsion_square(1.0 / 16);
    cfg.f = Nonlinearity::parse("(scale 100 (exp u))");
    cfg.max_iterations = 4;
    CHECK_THROWS_WITH_AS(solve_dirichlet(cfg), doctest::Contains("newton-diverged"), Error);
  }

  TEST_CASE("mild nonlinearities converge") {
    SolveConfig cfg = torsion_square(1.0 / 32);
    cfg.f = Nonlinearity::parse("(exp u)");
    const SolveResult res = solve_dirichlet(cfg);
    CHECK(res.residual_maxnorm <= cfg.newton_tol);
    CHECK(res.newton_iterations >= 1);
    for (const auto& [i, j] : res.field.interior_nodes()) CHECK(res.field.value(i, j) >= 0.0);
  }

  TEST_CASE("config parsing") {
    std::istringstream good(
        "domain = rect 0 0 1 1\n"
        "h = 0.03125\n"
        "f = (exp u)\n"
        "tol = 1e-9\n"
        "max_iter = 30\n"
        "damping = 1\n");
    const SolveConfig cfg = parse_solve_config(good);
    CHECK(cfg.h == 0.03125);
    CHECK(cfg.newton_tol == 1e-9);
    CHECK(cfg.f.value(0.0) == 1.0);

    std::istringstream badkey("domain = rect 0 0 1 1\nwavelength = 3\n");
    CHECK_THROWS_WITH_AS(parse_solve_config(badkey), doctest::Contains("parse-error"), Error);

    std::istringstream nodomain("h = 0.1\n");
    CHECK_THROWS_AS(parse_solve_config(nodomain), Error);

    std::istringstream nobox("domain = level (+ (pow x 2) (pow y 2) -1)\nh = 0.1\n");
    CHECK_THROWS_AS(parse_solve_config(nobox), Error);
  }
}
