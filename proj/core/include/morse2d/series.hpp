#pragma once

#include <span>
#include <vector>

namespace morse2d {

/// Truncated bivariate Taylor series sum c[a,b] dx^a dy^b over a+b <= order,
/// order <= 6. Used for forward (Taylor-mode) differentiation of field
/// expressions: evaluating an expression on Series2 inputs yields all mixed
/// partials at once.
class Series2 {
public:
  static constexpr int kMaxOrder = 6;

  explicit Series2(int order);
  static Series2 constant(int order, double c);
  static Series2 variable(int order, int axis, double base);

  int order() const { return order_; }
  double at(int a, int b) const { return c_[idx(a, b)]; }
  double& at(int a, int b) { return c_[idx(a, b)]; }
  double value() const { return c_[0]; }

  Series2 operator+(const Series2& o) const;
  Series2 operator-(const Series2& o) const;
  Series2 operator*(const Series2& o) const;
  Series2 scaled(double k) const;
  Series2 pow(int k) const;  // k >= 0

  /// g(this) where g is given by derivatives g^(k)(value()) for k = 0..order.
  Series2 compose(std::span<const double> g_derivatives) const;

  /// Mixed partial d^(a+b) / dx^a dy^b implied by the stored coefficients.
  double partial(int a, int b) const;

  static int idx(int a, int b) {
    const int s = a + b;
    return s * (s + 1) / 2 + b;
  }
  static int size(int order) { return (order + 1) * (order + 2) / 2; }

private:
  int order_;
  std::vector<double> c_;
};

}  // namespace morse2d
