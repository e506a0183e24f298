#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morse2d/errors.hpp"
#include "morse2d/jets.hpp"
#include "morse2d/profile.hpp"
#include "morse2d/solve.hpp"

using namespace morse2d;
using morse2d::testing::Rng;

namespace {

Poly2 example41_poly() {
  Poly2 u = Poly2::constant(Rational(1, 200));
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(4, false);
  return u;
}

Poly2 example42_poly(int A = 18) {
  Poly2 u = Poly2::constant(Rational(1, 10000));
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(3, false);
  u = u - harmonic_basis(4, false).scaled(Rational(A));
  return u;
}

FieldDomain box_domain(double r) {
  FieldDomain d;
  d.box = {-r, -r, r, r};
  return d;
}

}  // namespace

TEST_SUITE("jets") {
  TEST_CASE("exact jets of Re(z^4)") {
    const TaylorJet j = jet_exact(harmonic_basis(4, false), {0, 0}, 4);
    CHECK(j.coeff(4, 0) == 24.0);
    CHECK(j.coeff(2, 2) == -24.0);
    CHECK(j.coeff(0, 4) == 24.0);
    for (int b = 0; b <= 3; ++b) CHECK(j.coeff(3 - b, b) == 0.0);
    CHECK(j.exact());
    CHECK(j.err(4, 0) == 0.0);
  }

  TEST_CASE("exact jets of the worked examples") {
    const TaylorJet j41 = jet_exact(example41_poly(), {0, 0}, 4);
    CHECK(j41.coeff(0, 2) == -1.0);
    CHECK(j41.coeff(4, 0) == -24.0);
    CHECK(j41.coeff(3, 1) == 0.0);

    const TaylorJet j42 = jet_exact(example42_poly(), {0, 0}, 3);
    CHECK(j42.coeff(0, 2) == -1.0);
    CHECK(j42.coeff(3, 0) == -6.0);
    CHECK(j42.coeff(2, 1) == 0.0);

    // Hessian at the second critical point (-1/24, 0) is diag(-1/8, -7/8);
    // the double nearest -1/24 is the evaluation point, hence the 1e-15 slack
    const TaylorJet jp1 = jet_exact(example42_poly(), {-1.0 / 24, 0}, 2);
    CHECK(jp1.coeff(2, 0) == doctest::Approx(-0.125).epsilon(1e-14));
    CHECK(jp1.coeff(1, 1) == 0.0);
    CHECK(jp1.coeff(0, 2) == doctest::Approx(-0.875).epsilon(1e-14));
    CHECK(std::abs(jp1.coeff(1, 0)) <= 1e-15);
    CHECK(jp1.coeff(0, 1) == 0.0);
  }

  TEST_CASE("numeric jets of cos y") {
    FieldDomain dom = box_domain(1.0);
    ExprField u(FieldExpr::along_coordinate(Profile::cosine, 1), dom);
    const TaylorJet j = jet_numeric(u, {0, 0}, 4);
    CHECK(std::abs(j.coeff(0, 2) - (-1.0)) <= 1e-8);
    CHECK(std::abs(j.coeff(0, 4) - 1.0) <= 1e-6);
    CHECK(std::abs(j.coeff(1, 1)) <= 1e-8);
    // error estimates honest: |estimate - truth| <= 3 err
    CHECK(std::abs(j.coeff(0, 2) + 1.0) <= 3 * j.err(0, 2));
    CHECK(std::abs(j.coeff(0, 4) - 1.0) <= 3 * j.err(0, 4));
  }

  TEST_CASE("numeric jets of the radial Bessel field at the origin") {
    const double P = bessel_j1_first_zero();
    FieldDomain dom = box_domain(8.0);
    ExprField u(FieldExpr::radial(Profile::bessel_j0, 0.0, P), dom);
    const double upp = -std::cyl_bessel_j(0, P);  // u''(P)
    const TaylorJet j = jet_numeric(u, {0, 0}, 4);
    CHECK(std::abs(j.coeff(0, 2) - upp) <= 1e-6);
    CHECK(upp == doctest::Approx(0.402759395702553).epsilon(1e-12));
    // analytic jets agree much tighter
    const TaylorJet ja = jet_analytic(*u.as_expr(), {0, 0}, 4);
    CHECK(std::abs(ja.coeff(0, 2) - upp) <= 1e-12);
    CHECK(std::abs(ja.coeff(2, 1) - (-upp / P)) <= 1e-12);
    CHECK(std::abs(ja.coeff(4, 0) - 3 * upp / (P * P)) <= 1e-12);
    CHECK(ja.coeff(3, 0) == 0.0);
  }

  TEST_CASE("numeric jets agree with exact jets within 3 err on polynomial fields") {
    const Poly2 polys[3] = {example41_poly(), example42_poly(), harmonic_basis(5, true)};
    for (const Poly2& p : polys) {
      FieldDomain dom = box_domain(1.0);
      PolyField u(p, dom);
      const TaylorJet je = jet_exact(p, {0.1, -0.05}, 5);
      const TaylorJet jn = jet_numeric(u, {0.1, -0.05}, 5);
      for (int m = 1; m <= 5; ++m)
        for (int b = 0; b <= m; ++b) {
          const int a = m - b;
          CHECK(std::abs(jn.coeff(a, b) - je.coeff(a, b)) <= 3 * jn.err(a, b));
        }
    }
  }

  TEST_CASE("grid torsion solution has a clean mixed second derivative at the center") {
    SolveConfig cfg;
    cfg.domain.kind = DomainSpec::Kind::rect;
    cfg.domain.box = {0, 0, 1, 1};
    cfg.h = 1.0 / 64;
    cfg.f = Nonlinearity::constant(1.0);
    const SolveResult sol = solve_dirichlet(cfg);
    GridBackedField u(sol.field);
    const TaylorJet j = jet_numeric(u, {0.5, 0.5}, 2);
    CHECK(std::abs(j.coeff(1, 1)) <= 1e-6);
    CHECK(j.coeff(2, 0) < 0);
    CHECK(j.coeff(0, 2) < 0);
  }

  TEST_CASE("normal form: isotropic nondegenerate Hessian keeps the axes") {
    Poly2 p = Poly2::monomial(2, 0, Rational(-1)) + Poly2::monomial(0, 2, Rational(-1));
    const TaylorJet j = jet_exact(p, {0, 0}, 2);
    const NormalForm nf = rotate_to_normal_form(j, 1e-12);
    CHECK_FALSE(nf.degenerate);
    CHECK(nf.theta == 0.0);
    CHECK(nf.hessian_eigenvalues[0] == -2.0);
    CHECK(nf.hessian_eigenvalues[1] == -2.0);
  }

  TEST_CASE("normal form: the cubic-quartic example is already aligned") {
    const TaylorJet j = jet_exact(example42_poly(), {0, 0}, 6);
    const NormalForm nf = rotate_to_normal_form(j, 1e-12);
    CHECK(nf.degenerate);
    CHECK(nf.zero_eigenvalues == 1);
    CHECK(nf.theta == 0.0);
    CHECK(nf.u_yy() == -1.0);
    CHECK(nf.jet.coeff(2, 0) == 0.0);
    CHECK(nf.jet.coeff(1, 1) == 0.0);
  }

  TEST_CASE("normal form recovers a rational pre-rotation exactly") {
    const Poly2 u = example42_poly();
    const Rational c(3, 5), s(4, 5);
    const Poly2 v = u.compose_linear(c, -s, s, c);
    const TaylorJet jv = jet_exact(v, {0, 0}, 6);
    const NormalForm nf = rotate_to_normal_form(jv, 1e-12);
    CHECK(nf.degenerate);
    const double expected_theta = -std::atan2(0.8, 0.6);
    CHECK(std::abs(nf.theta - expected_theta) <= 1e-10);
    // the rationally rotated jet matches the unrotated jet exactly
    const TaylorJet ju = jet_exact(u, {0, 0}, 6);
    CHECK(nf.jet.exact());
    for (int m = 0; m <= 6; ++m)
      for (int b = 0; b <= m; ++b) CHECK(nf.jet.coeff(m - b, b) == ju.coeff(m - b, b));
  }

  TEST_CASE("not-a-critical-point is rejected") {
    const TaylorJet j = jet_exact(example41_poly(), {0.1, 0.02}, 3);
    CHECK_THROWS_WITH_AS(rotate_to_normal_form(j, 1e-12),
                         doctest::Contains("not-a-critical-point"), Error);
  }

  TEST_CASE("minimal order n on the worked examples") {
    {
      const NormalForm nf = rotate_to_normal_form(jet_exact(example41_poly(), {0, 0}, 6), 1e-12);
      const OrderN on = minimal_order_n(nf);
      CHECK(on.n == 4);
      CHECK(on.alpha == -24.0);
      CHECK(on.beta == 0.0);
    }
    {
      const NormalForm nf = rotate_to_normal_form(jet_exact(example42_poly(), {0, 0}, 6), 1e-12);
      const OrderN on = minimal_order_n(nf);
      CHECK(on.n == 3);
      CHECK(on.alpha == -6.0);
      CHECK(on.beta == 0.0);
    }
    {
      const double P = bessel_j1_first_zero();
      const FieldExpr e = FieldExpr::radial(Profile::bessel_j0, 0.0, P);
      const NormalForm nf = rotate_to_normal_form(jet_analytic(e, {0, 0}, 6), 1e-10);
      const OrderN on = minimal_order_n(nf);
      const double upp = -std::cyl_bessel_j(0, P);
      CHECK(on.n == 3);
      CHECK(std::abs(on.alpha) <= 1e-12);
      CHECK(on.beta == doctest::Approx(-upp / P).epsilon(1e-10));
    }
  }

  TEST_CASE("order exhausted for the pure 1D profile") {
    const FieldExpr e = FieldExpr::along_coordinate(Profile::cosine, 1);
    const NormalForm nf = rotate_to_normal_form(jet_analytic(e, {0, 0}, 6), 1e-10);
    CHECK(nf.degenerate);
    CHECK_THROWS_WITH_AS(minimal_order_n(nf), doctest::Contains("order-exhausted"), Error);
  }

  TEST_CASE("first pure-x order l") {
    {
      const double P = bessel_j1_first_zero();
      const FieldExpr e = FieldExpr::radial(Profile::bessel_j0, 0.0, P);
      const NormalForm nf = rotate_to_normal_form(jet_analytic(e, {0, 0}, 6), 1e-10);
      const OrderL ol = first_pure_x_order_l(nf, 3);
      const double upp = -std::cyl_bessel_j(0, P);
      CHECK(ol.l == 4);
      CHECK(ol.coeff == doctest::Approx(3 * upp / (P * P)).epsilon(1e-10));
    }
    {
      const NormalForm nf = rotate_to_normal_form(jet_exact(example42_poly(), {0, 0}, 6), 1e-12);
      const OrderL ol = first_pure_x_order_l(nf, 3);
      CHECK(ol.l == 4);
      CHECK(ol.coeff == -432.0);  // -24 A with A = 18
    }
    {
      // y^2/2 + Im(z^3) has no pure-x term of order 4
      Poly2 p = Poly2::monomial(0, 2, Rational(1, 2)) + harmonic_basis(3, true);
      const NormalForm nf = rotate_to_normal_form(jet_exact(p, {0, 0}, 6), 1e-12);
      CHECK_THROWS_WITH_AS(first_pure_x_order_l(nf, 3), doctest::Contains("no-such-l"), Error);
    }
    {
      const NormalForm nf = rotate_to_normal_form(jet_exact(example41_poly(), {0, 0}, 6), 1e-12);
      CHECK_THROWS_WITH_AS(first_pure_x_order_l(nf, 4), doctest::Contains("wrong-parity"), Error);
    }
  }

  TEST_CASE("rotation invariance of (n, l, |u_yy|, alpha^2+beta^2)") {
    const Rational c(3, 5), s(4, 5);
    const Poly2 fields[2] = {example41_poly(), example42_poly()};
    for (const Poly2& u : fields) {
      const NormalForm nf0 = rotate_to_normal_form(jet_exact(u, {0, 0}, 6), 1e-12);
      const Poly2 v = u.compose_linear(c, -s, s, c);
      const NormalForm nf1 = rotate_to_normal_form(jet_exact(v, {0, 0}, 6), 1e-12);
      const OrderN on0 = minimal_order_n(nf0), on1 = minimal_order_n(nf1);
      CHECK(on0.n == on1.n);
      CHECK(std::abs(std::abs(nf0.u_yy()) - std::abs(nf1.u_yy())) <= 1e-8);
      const double q0 = on0.alpha * on0.alpha + on0.beta * on0.beta;
      const double q1 = on1.alpha * on1.alpha + on1.beta * on1.beta;
      CHECK(std::abs(q0 - q1) <= 1e-8 * std::max(1.0, q0));
      if (on0.n % 2 == 1) {
        const OrderL l0 = first_pure_x_order_l(nf0, on0.n);
        const OrderL l1 = first_pure_x_order_l(nf1, on1.n);
        CHECK(l0.l == l1.l);
      }
    }
  }

  TEST_CASE("scaling equivariance is exact on the exact path") {
    const Poly2 u = example42_poly();
    for (const Rational lam : {Rational(1, 2), Rational(2)}) {
      const Poly2 v = u.scaled(lam);
      const NormalForm nf0 = rotate_to_normal_form(jet_exact(u, {0, 0}, 6), 1e-12);
      const NormalForm nf1 = rotate_to_normal_form(jet_exact(v, {0, 0}, 6), 1e-12);
      const OrderN on0 = minimal_order_n(nf0), on1 = minimal_order_n(nf1);
      CHECK(on0.n == on1.n);
      const double lamd = to_double(lam);
      for (int m = 0; m <= 6; ++m)
        for (int b = 0; b <= m; ++b)
          CHECK(nf1.jet.coeff(m - b, b) == lamd * nf0.jet.coeff(m - b, b));
    }
  }

  TEST_CASE("harmonic chain residuals") {
    {
      const TaylorJet j = jet_exact(harmonic_basis(4, false), {0, 0}, 4);
      const NormalForm nf = rotate_to_normal_form(j, 1e-12);
      CHECK(nf.zero_eigenvalues == 2);
      const auto res = check_harmonic_chain(nf.jet, 4, true);
      REQUIRE(res.size() == 3);  // (2,2), (0,4) even chain; (1,3) odd chain
      for (const double r : res) CHECK(r == 0.0);
    }
    {
      const NormalForm nf = rotate_to_normal_form(jet_exact(example41_poly(), {0, 0}, 6), 1e-12);
      const auto res = check_harmonic_chain(nf.jet, 4, false);
      REQUIRE(res.size() == 2);
      CHECK(res[0] == 0.0);  // |coeff(2,2) - (-1)(-24)| = |24 - 24|
      CHECK(res[1] == 0.0);
    }
    {
      const TaylorJet j = jet_exact(harmonic_basis(4, false), {0, 0}, 3);
      CHECK_THROWS_WITH_AS(check_harmonic_chain(j, 4, true),
                           doctest::Contains("jet-order-too-small"), Error);
    }
  }

  TEST_CASE("inequality slack arithmetic") {
    CHECK(check_inequality_1_8(-1.0, 1.0, -8.0, 3) == doctest::Approx(5.0 / 3).epsilon(1e-15));
    CHECK(check_inequality_1_8(-1.0, 1.0, -1.0, 3) == doctest::Approx(1.0 / 3 - 1).epsilon(1e-15));
    CHECK(check_inequality_1_8(-1.0, 1.0, -1.0, 3) < 0.0);
    CHECK_THROWS_WITH_AS(check_inequality_1_8(-1.0, 1.0, -1.0, 4),
                         doctest::Contains("wrong-parity"), Error);
  }
}
