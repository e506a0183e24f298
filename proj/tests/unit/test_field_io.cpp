#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "morse2d/errors.hpp"
#include "morse2d/field_io.hpp"

using namespace morse2d;
using morse2d::testing::Rng;

TEST_SUITE("field_io") {
  TEST_CASE("poly round trip is exact") {
    Poly2 p;
    p.set(0, 2, Rational(-1, 2));
    p.set(4, 0, Rational(-1));
    p.set(2, 2, Rational(6));
    p.set(0, 4, Rational(-1));
    p.set(0, 0, Rational(1, 200));
    std::stringstream ss;
    write_field(ss, p);
    const LoadedField back = read_field(ss);
    REQUIRE(std::holds_alternative<Poly2>(back));
    CHECK(std::get<Poly2>(back) == p);
  }

  TEST_CASE("expr round trip keeps the expression line") {
    const FieldExpr e = FieldExpr::parse_prefix("(+ (scale 0.5 (pow y 2)) (uni cos y 0))");
    std::stringstream ss;
    write_field(ss, e);
    const LoadedField back = read_field(ss);
    REQUIRE(std::holds_alternative<FieldExpr>(back));
    CHECK(std::get<FieldExpr>(back).to_prefix() == e.to_prefix());
  }

  TEST_CASE("grid round trip is byte-stable and preserves the mask") {
    auto phi = [](Vec2 p) { return p.x * p.x + p.y * p.y - 0.49; };
    GridField g = build_masked_grid(phi, {-1, -1, 1, 1}, 0.125, Vec2{0, 0}, 0.0);
    Rng rng(31);
    for (const auto& [i, j] : g.interior_nodes()) g.value(i, j) = rng.next_double(-1, 1);

    std::stringstream ss;
    write_field(ss, g);
    const std::string first = ss.str();
    const LoadedField back = read_field(ss);
    REQUIRE(std::holds_alternative<GridField>(back));
    const GridField& gb = std::get<GridField>(back);
    CHECK(gb.nx() == g.nx());
    CHECK(gb.ny() == g.ny());
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (g.kind(i, j) == NodeKind::exterior) {
          CHECK(gb.kind(i, j) == NodeKind::exterior);
        } else {
          CHECK(gb.value(i, j) == g.value(i, j));
          CHECK(gb.kind(i, j) != NodeKind::exterior);
        }
      }
    std::stringstream ss2;
    write_field(ss2, gb);
    CHECK(ss2.str() == first);
  }

  TEST_CASE("malformed inputs raise parse-error") {
    {
      std::stringstream ss("JUNK poly\n");
      CHECK_THROWS_WITH_AS(read_field(ss), doctest::Contains("parse-error"), Error);
    }
    {
      std::stringstream ss("FIELD poly\n1 notanumber 3/4\n");
      CHECK_THROWS_AS(read_field(ss), Error);
    }
    {
      std::stringstream ss("FIELD grid\nGRID2D 2 2 0 0 0.5 0.5\n1 2 3\n");  // short list
      CHECK_THROWS_AS(read_field(ss), Error);
    }
    {
      std::stringstream ss("FIELD poly\n1 2 3/0\n");
      CHECK_THROWS_AS(read_field(ss), Error);
    }
  }
}
