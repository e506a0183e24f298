#pragma once

#include <memory>
#include <string>
#include <vector>

#include "morse2d/classify.hpp"
#include "morse2d/expr.hpp"
#include "morse2d/poly2.hpp"
#include "morse2d/rational.hpp"
#include "morse2d/scalar_field.hpp"

namespace morse2d {

/// One replication expectation. Every expected value names the oracle that
/// produced it; a case passes only if all of its facts pass.
struct ExpectedFact {
  enum class Mode { near, at_least, at_most };
  std::string quantity;
  Mode mode = Mode::near;
  double expected = 0;
  double tolerance = 0;  // 0: exact (near mode)
  std::string oracle;
  double actual = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
};

struct ReplicationCase {
  std::string id;
  std::string description;
  std::vector<ExpectedFact> facts;
  std::vector<std::string> notes;  // parameters actually used
  bool passed() const;
};

/// u = alpha_bar - (y^2/2 + x^4 - 6x^2y^2 + y^4) on the sublevel domain
/// where u > 0. Validated constructively: the zero level set must close
/// inside the scan box (error level-set-not-closed otherwise).
struct QuarticExample {
  Poly2 field;
  FieldDomain domain;
  Rational alpha_bar;
};
QuarticExample example_quartic(const Rational& alpha_bar);

/// u = c - (y^2/2 + x^3 - 3xy^2 + A(x^4 - 6x^2y^2 + y^4)), A > 35/2,
/// on {u > 0}; expected critical points (0,0) and (-3/(4A), 0).
struct StarExample {
  Poly2 field;
  FieldDomain domain;
  Rational A, c;
  Vec2 saddle{0, 0};
  Vec2 maximum;
};
StarExample example_star_shaped(const Rational& A, const Rational& c);

/// u(x,y) = J0(r), r = distance to (0, P) with P the first zero of J1;
/// solves -Lap u = u; the origin lies on a circle of minima.
struct RadialExample {
  FieldExpr field;
  FieldDomain domain;   // evaluation box
  FieldDomain window;   // critical-point search window around the origin
  double ring_radius;   // P
};
RadialExample example_radial_bessel();

/// a Re(z^n) + b Im(z^n), (a,b) != (0,0) (error zero-mix).
Poly2 example_harmonic(int n, const Rational& a, const Rational& b);

/// u = cos y: the u_x == 0 line-of-maxima situation.
FieldExpr example_cosine();

/// Ray test: every ray from the origin meets the domain in a single interval.
bool star_shaped_from_origin(const FieldDomain& dom, int directions = 360);

std::vector<std::string> replication_ids();
ReplicationCase run_replication(const std::string& id);  // unknown-id

}  // namespace morse2d
