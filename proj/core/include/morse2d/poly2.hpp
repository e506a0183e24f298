#pragma once

#include <map>
#include <utility>

#include "morse2d/point.hpp"
#include "morse2d/rational.hpp"

namespace morse2d {

/// Bivariate polynomial with exact rational coefficients, keyed by
/// exponent pairs (a,b) for x^a y^b. Only nonzero coefficients are stored,
/// so "this coefficient vanishes" is decidable.
class Poly2 {
public:
  using Key = std::pair<int, int>;
  using Terms = std::map<Key, Rational>;

  Poly2() = default;

  static Poly2 constant(Rational c);
  static Poly2 coordinate(int axis);  // 0 -> x, 1 -> y
  static Poly2 monomial(int a, int b, Rational c);

  void set(int a, int b, Rational c);
  const Rational& coeff(int a, int b) const;  // zero when absent
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // max a+b, 0 for the zero polynomial
  const Terms& terms() const { return terms_; }

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator-() const;
  Poly2 scaled(const Rational& k) const;

  Poly2 derivative(int dx, int dy) const;
  Poly2 laplacian() const { return derivative(2, 0) + derivative(0, 2); }

  Rational eval(const Rational& x, const Rational& y) const;
  double eval(double x, double y) const;
  double eval(Vec2 p) const { return eval(p.x, p.y); }

  /// p(m00*x + m01*y, m10*x + m11*y), exact.
  Poly2 compose_linear(const Rational& m00, const Rational& m01, const Rational& m10,
                       const Rational& m11) const;
  /// p(x + cx, y + cy), exact (Taylor shift).
  Poly2 shifted(const Rational& cx, const Rational& cy) const;

  bool operator==(const Poly2& o) const { return terms_ == o.terms_; }

private:
  Terms terms_;
};

/// Re(z^n) or Im(z^n) as exact integer-coefficient polynomials, n >= 1.
Poly2 harmonic_basis(int n, bool imaginary);

}  // namespace morse2d
