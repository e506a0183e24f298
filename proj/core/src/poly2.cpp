#include "morse2d/poly2.hpp"

#include <vector>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {
const Rational kZero{0};

Rational binomial(int n, int k) {
  Rational r{1};
  for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
  return r;
}
}  // namespace

Poly2 Poly2::constant(Rational c) {
  Poly2 p;
  p.set(0, 0, std::move(c));
  return p;
}

Poly2 Poly2::coordinate(int axis) { return monomial(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1, 1); }

Poly2 Poly2::monomial(int a, int b, Rational c) {
  Poly2 p;
  p.set(a, b, std::move(c));
  return p;
}

void Poly2::set(int a, int b, Rational c) {
  if (a < 0 || b < 0) fail("parse-error", "negative exponent in polynomial");
  if (c == 0)
    terms_.erase({a, b});
  else
    terms_[{a, b}] = std::move(c);
}

const Rational& Poly2::coeff(int a, int b) const {
  auto it = terms_.find({a, b});
  return it == terms_.end() ? kZero : it->second;
}

int Poly2::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r = *this;
  for (const auto& [k, c] : o.terms_) r.set(k.first, k.second, r.coeff(k.first, k.second) + c);
  return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + (-o); }

Poly2 Poly2::operator-() const { return scaled(Rational(-1)); }

Poly2 Poly2::scaled(const Rational& k) const {
  Poly2 r;
  if (k == 0) return r;
  for (const auto& [key, c] : terms_) r.terms_[key] = c * k;
  return r;
}

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r;
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : o.terms_) {
      const Key k{k1.first + k2.first, k1.second + k2.second};
      r.set(k.first, k.second, r.coeff(k.first, k.second) + c1 * c2);
    }
  return r;
}

Poly2 Poly2::derivative(int dx, int dy) const {
  Poly2 r;
  for (const auto& [k, c] : terms_) {
    const int a = k.first, b = k.second;
    if (a < dx || b < dy) continue;
    Rational f = c;
    for (int i = 0; i < dx; ++i) f *= Rational(a - i);
    for (int i = 0; i < dy; ++i) f *= Rational(b - i);
    r.set(a - dx, b - dy, f);
  }
  return r;
}

Rational Poly2::eval(const Rational& x, const Rational& y) const {
  // Exact powers up to the degree, then a straight term sum.
  const int d = degree();
  std::vector<Rational> xp(d + 1), yp(d + 1);
  xp[0] = yp[0] = 1;
  for (int i = 1; i <= d; ++i) {
    xp[i] = xp[i - 1] * x;
    yp[i] = yp[i - 1] * y;
  }
  Rational s{0};
  for (const auto& [k, c] : terms_) s += c * xp[k.first] * yp[k.second];
  return s;
}

double Poly2::eval(double x, double y) const {
  const int d = degree();
  double xp[32], yp[32];
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= d && i < 32; ++i) {
    xp[i] = xp[i - 1] * x;
    yp[i] = yp[i - 1] * y;
  }
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += to_double(c) * xp[k.first] * yp[k.second];
  return s;
}

Poly2 Poly2::compose_linear(const Rational& m00, const Rational& m01, const Rational& m10,
                            const Rational& m11) const {
  const int d = degree();
  const Poly2 lx = Poly2::monomial(1, 0, m00) + Poly2::monomial(0, 1, m01);
  const Poly2 ly = Poly2::monomial(1, 0, m10) + Poly2::monomial(0, 1, m11);
  std::vector<Poly2> xp(d + 1), yp(d + 1);
  xp[0] = yp[0] = Poly2::constant(1);
  for (int i = 1; i <= d; ++i) {
    xp[i] = xp[i - 1] * lx;
    yp[i] = yp[i - 1] * ly;
  }
  Poly2 r;
  for (const auto& [k, c] : terms_) r = r + (xp[k.first] * yp[k.second]).scaled(c);
  return r;
}

Poly2 Poly2::shifted(const Rational& cx, const Rational& cy) const {
  const int d = degree();
  const Poly2 lx = Poly2::monomial(1, 0, 1) + Poly2::constant(cx);
  const Poly2 ly = Poly2::monomial(0, 1, 1) + Poly2::constant(cy);
  std::vector<Poly2> xp(d + 1), yp(d + 1);
  xp[0] = yp[0] = Poly2::constant(1);
  for (int i = 1; i <= d; ++i) {
    xp[i] = xp[i - 1] * lx;
    yp[i] = yp[i - 1] * ly;
  }
  Poly2 r;
  for (const auto& [k, c] : terms_) r = r + (xp[k.first] * yp[k.second]).scaled(c);
  return r;
}

Poly2 harmonic_basis(int n, bool imaginary) {
  if (n < 1) fail("parse-error", "harmonic_basis requires n >= 1");
  Poly2 p;
  if (!imaginary) {
    for (int k = 0; 2 * k <= n; ++k) {
      Rational c = binomial(n, 2 * k);
      if (k % 2) c = -c;
      p.set(n - 2 * k, 2 * k, c);
    }
  } else {
    for (int k = 0; 2 * k + 1 <= n; ++k) {
      Rational c = binomial(n, 2 * k + 1);
      if (k % 2) c = -c;
      p.set(n - 2 * k - 1, 2 * k + 1, c);
    }
  }
  return p;
}

}  // namespace morse2d
