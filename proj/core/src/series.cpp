#include "morse2d/series.hpp"

#include <cmath>

#include "morse2d/errors.hpp"

namespace morse2d {

Series2::Series2(int order) : order_(order), c_(size_t(size(order)), 0.0) {
  if (order < 0 || order > kMaxOrder) fail("jet-order-too-small", "series order out of range");
}

Series2 Series2::constant(int order, double c) {
  Series2 s(order);
  s.c_[0] = c;
  return s;
}

Series2 Series2::variable(int order, int axis, double base) {
  Series2 s(order);
  s.c_[0] = base;
  if (order >= 1) s.at(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1) = 1.0;
  return s;
}

Series2 Series2::operator+(const Series2& o) const {
  Series2 r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Series2 Series2::operator-(const Series2& o) const {
  Series2 r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Series2 Series2::scaled(double k) const {
  Series2 r = *this;
  for (double& v : r.c_) v *= k;
  return r;
}

Series2 Series2::operator*(const Series2& o) const {
  Series2 r(order_);
  for (int s1 = 0; s1 <= order_; ++s1)
    for (int b1 = 0; b1 <= s1; ++b1) {
      const double v1 = c_[size_t(s1 * (s1 + 1) / 2 + b1)];
      if (v1 == 0.0) continue;
      const int a1 = s1 - b1;
      for (int s2 = 0; s2 + s1 <= order_; ++s2)
        for (int b2 = 0; b2 <= s2; ++b2) {
          const double v2 = o.c_[size_t(s2 * (s2 + 1) / 2 + b2)];
          if (v2 == 0.0) continue;
          r.at(a1 + (s2 - b2), b1 + b2) += v1 * v2;
        }
    }
  return r;
}

Series2 Series2::pow(int k) const {
  Series2 r = Series2::constant(order_, 1.0);
  for (int i = 0; i < k; ++i) r = r * (*this);
  return r;
}

Series2 Series2::compose(std::span<const double> g) const {
  // Horner on delta = this - value(); delta has zero constant term so the
  // truncation at `order_` terms is exact.
  Series2 delta = *this;
  delta.at(0, 0) = 0.0;
  double fact = 1.0;
  std::vector<double> coef(size_t(order_) + 1);
  for (int k = 0; k <= order_; ++k) {
    coef[size_t(k)] = g[size_t(k)] / fact;
    fact *= double(k + 1);
  }
  Series2 r = Series2::constant(order_, coef[size_t(order_)]);
  for (int k = order_ - 1; k >= 0; --k) {
    r = r * delta;
    r.at(0, 0) += coef[size_t(k)];
  }
  return r;
}

double Series2::partial(int a, int b) const {
  double f = 1.0;
  for (int i = 2; i <= a; ++i) f *= i;
  for (int i = 2; i <= b; ++i) f *= i;
  return at(a, b) * f;
}

}  // namespace morse2d
