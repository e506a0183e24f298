#pragma once

#include <optional>
#include <vector>

#include "morse2d/point.hpp"
#include "morse2d/poly2.hpp"
#include "morse2d/rational.hpp"
#include "morse2d/scalar_field.hpp"

namespace morse2d {

/// All mixed partials d^(a+b)u / dx^a dy^b at a center, for a+b <= order,
/// with per-coefficient error estimates (zero on the exact path, which also
/// carries the coefficients as exact rationals).
class TaylorJet {
public:
  TaylorJet(Vec2 center, int order);

  Vec2 center() const { return center_; }
  int order() const { return order_; }

  double coeff(int a, int b) const { return coeff_[idx(a, b)]; }
  double& coeff(int a, int b) { return coeff_[idx(a, b)]; }
  double err(int a, int b) const { return err_[idx(a, b)]; }
  double& err(int a, int b) { return err_[idx(a, b)]; }

  bool exact() const { return exact_; }
  const Rational& exact_coeff(int a, int b) const;
  void set_exact(int a, int b, Rational v);
  void make_exact();   // enable rational storage (errs forced to 0)
  void drop_exact();   // numeric-only from here on

  /// Largest |coeff| among entries of total order m.
  double order_scale(int m) const;
  /// The vanishing test: exact zero on the exact path, otherwise
  /// |coeff| < max(10 err, 1e-9 * order scale).
  bool is_zero_coeff(int a, int b) const;

  size_t idx(int a, int b) const;

private:
  Vec2 center_;
  int order_;
  std::vector<double> coeff_, err_;
  bool exact_ = false;
  std::vector<Rational> rat_;
};

/// Exact rational differentiation of a polynomial at a rational center.
TaylorJet jet_exact(const Poly2& p, Vec2 center, int order);

/// Central differences on tensor stencils with two-level Richardson
/// extrapolation; err is the observed extrapolation difference (with a
/// rounding floor). h0 = 0 selects the default per-order step
/// eps^(1/(m+2)) * domain diameter, snapped to grid nodes for grid fields.
TaylorJet jet_numeric(const ScalarField& u, Vec2 center, int order, double h0 = 0.0);

/// Analytic jets for expression-backed fields (forward Taylor mode).
TaylorJet jet_analytic(const FieldExpr& e, Vec2 center, int order);

/// Best available extraction for the field's backing.
TaylorJet best_jet(const ScalarField& u, Vec2 center, int order);

/// Jet of the rotated field v(X,Y) = u(x,y) with X-axis along (c, s).
TaylorJet rotate_jet(const TaylorJet& j, double c, double s,
                     const std::optional<std::pair<Rational, Rational>>& exact_cs = std::nullopt);

struct NormalForm {
  double theta = 0;                                  // rotation angle
  TaylorJet jet;                                     // rotated jet
  std::array<double, 2> hessian_eigenvalues{0, 0};   // ascending
  bool degenerate = false;
  int zero_eigenvalues = 0;  // 0, 1 or 2

  double u_yy() const { return jet.coeff(0, 2); }
};

/// Rotates so that u_xx = u_xy = 0 at a degenerate critical point (kernel
/// direction along x); nondegenerate inputs are rotated to principal axes
/// and flagged. grad_tol is the absolute critical-point tolerance.
NormalForm rotate_to_normal_form(const TaylorJet& j, double grad_tol);

struct OrderN {
  int n;
  double alpha, beta;  // pure-x and x^(n-1)y coefficients at order n
};
/// Smallest n >= 3 with a nonvanishing coeff(n-k, k), k = 0..n-1
/// (error order-exhausted).
OrderN minimal_order_n(const NormalForm& nf);

struct OrderL {
  int l;
  double coeff;  // pure-x coefficient at order l
};
/// Smallest l in [n+1, 2n-2] with coeff(l,0) != 0; errors wrong-parity
/// (n even), jet-order-too-small, no-such-l.
OrderL first_pure_x_order_l(const NormalForm& nf, int n);

/// Alternating-sign relations among the order-n partials forced by the
/// equation. kernel_degenerate selects the full ranges (u_yy = 0 case);
/// otherwise the truncated ranges apply. Returns even-chain residuals
/// followed by odd-chain residuals.
std::vector<double> check_harmonic_chain(const TaylorJet& normal_jet, int n,
                                         bool kernel_degenerate);

/// slack = 2((n-1)!)^2/(2n-2)! * u_yy * coeff_2n2 - beta^2 (n odd, l = 2n-2).
double check_inequality_1_8(double u_yy, double beta, double coeff_2n2, int n);

}  // namespace morse2d
