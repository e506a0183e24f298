#include <cmath>
#include <doctest.h>

#include "helpers.hpp"
#include "morse2d/errors.hpp"
#include "morse2d/grid.hpp"
#include "morse2d/poly2.hpp"

using namespace morse2d;
using morse2d::testing::Rng;

namespace {

GridField sampled_rect(const Poly2& p, Bounds box, double h) {
  GridField g = build_rect_grid(box, h, 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) g.value(i, j) = p.eval(g.node(i, j));
  return g;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("constant field evaluates to the constant everywhere inside") {
    const GridField g = sampled_rect(Poly2::constant(Rational(5)), {0, 0, 1, 1}, 1.0 / 16);
    Rng rng(2);
    for (int k = 0; k < 30; ++k) {
      const Vec2 p{rng.next_double(0.05, 0.95), rng.next_double(0.05, 0.95)};
      CHECK(g.eval(p) == doctest::Approx(5.0).epsilon(1e-14));
    }
  }

  TEST_CASE("bicubic interpolation reproduces random cubics to 1e-12 relative") {
    Rng rng(23);
    for (int rep = 0; rep < 25; ++rep) {
      Poly2 p;
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b) p.set(a, b, rng.next_rational());
      const GridField g = sampled_rect(p, {-1, -1, 1, 1}, 0.125);
      for (int pt = 0; pt < 8; ++pt) {
        const Vec2 q{rng.next_double(-0.8, 0.8), rng.next_double(-0.8, 0.8)};
        const double exact = p.eval(q);
        const double interp = g.eval(q);
        CHECK(std::abs(interp - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
      }
    }
  }

  TEST_CASE("interpolant derivatives reproduce quadratics") {
    Poly2 p;  // x^2 + 3xy - 2y^2 + x
    p.set(2, 0, 1);
    p.set(1, 1, 3);
    p.set(0, 2, -2);
    p.set(1, 0, 1);
    const GridField g = sampled_rect(p, {-1, -1, 1, 1}, 0.1);
    const Vec2 q{0.31, -0.17};
    const Vec2 grad = g.gradient(q);
    CHECK(grad.x == doctest::Approx(2 * q.x + 3 * q.y + 1).epsilon(1e-10));
    CHECK(grad.y == doctest::Approx(3 * q.x - 4 * q.y).epsilon(1e-10));
    const auto h = g.hessian(q);
    CHECK(h[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(h[1] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(h[2] == doctest::Approx(-4.0).epsilon(1e-9));
  }

  TEST_CASE("evaluation outside the domain fails") {
    const GridField g = sampled_rect(Poly2::constant(Rational(1)), {0, 0, 1, 1}, 0.125);
    CHECK_THROWS_AS(g.eval({2.0, 0.5}), Error);
    CHECK_THROWS_AS(g.eval({0.5, -1.0}), Error);
  }

  TEST_CASE("masked disk grid classifies nodes and arms") {
    auto phi = [](Vec2 p) { return p.x * p.x + p.y * p.y - 0.64; };  // disk r = 0.8
    const GridField g = build_masked_grid(phi, {-1, -1, 1, 1}, 0.1, Vec2{0, 0}, 0.0);
    CHECK(g.count(NodeKind::interior) > 0);
    CHECK(g.count(NodeKind::boundary) > 0);
    CHECK(g.count(NodeKind::exterior) > 0);
    // every interior node's edge neighbors are interior or boundary
    for (const auto& [i, j] : g.interior_nodes()) {
      CHECK(g.kind(i - 1, j) != NodeKind::exterior);
      CHECK(g.kind(i + 1, j) != NodeKind::exterior);
      CHECK(g.kind(i, j - 1) != NodeKind::exterior);
      CHECK(g.kind(i, j + 1) != NodeKind::exterior);
    }
    // cut arms: the cut point must sit on the circle
    REQUIRE(g.cut_arms() != nullptr);
    for (const auto& [i, j] : g.interior_nodes()) {
      const CutArms a = g.arm(i, j);
      const Vec2 p = g.node(i, j);
      if (a.e < 1.0) CHECK(std::abs(phi({p.x + a.e * 0.1, p.y})) < 1e-10);
      if (a.n < 1.0) CHECK(std::abs(phi({p.x, p.y + a.n * 0.1})) < 1e-10);
    }
  }

  TEST_CASE("leaking domain component is rejected") {
    auto phi = [](Vec2 p) { return p.y * p.y - 0.01; };  // infinite strip
    CHECK_THROWS_WITH_AS(build_masked_grid(phi, {-1, -1, 1, 1}, 0.1, Vec2{0, 0}, 0.0),
                         doctest::Contains("level-set-not-closed"), Error);
  }
}
