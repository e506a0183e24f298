#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "morse2d/expr.hpp"
#include "morse2d/grid.hpp"
#include "morse2d/nonlinearity.hpp"
#include "morse2d/point.hpp"
#include "morse2d/poly2.hpp"

namespace morse2d {

/// Analysis domain: a bounding box, optionally intersected with the sublevel
/// set {level < 0} of a mask function.
struct FieldDomain {
  Bounds box{-1, -1, 1, 1};
  std::function<double(Vec2)> level;  // empty: box only

  bool contains(Vec2 p) const { return box.contains(p) && (!level || level(p) < 0.0); }
  double diameter() const { return box.diameter(); }
  /// Distance from p to the domain boundary (exact for boxes, ray-sampled
  /// along 16 directions for masked domains).
  double distance_to_boundary(Vec2 p) const;
};

/// A 2D scalar field with one of three backings (exact polynomial,
/// closed-form expression, grid samples), exposing values and derivatives.
class ScalarField {
public:
  virtual ~ScalarField() = default;

  virtual double value(Vec2 p) const = 0;
  virtual Vec2 gradient(Vec2 p) const = 0;
  virtual std::array<double, 3> hessian(Vec2 p) const = 0;  // uxx, uxy, uyy
  virtual const FieldDomain& domain() const = 0;
  virtual std::string describe() const = 0;

  virtual const Poly2* as_poly() const { return nullptr; }
  virtual const FieldExpr* as_expr() const { return nullptr; }
  virtual const GridField* as_grid() const { return nullptr; }
};

class PolyField final : public ScalarField {
public:
  PolyField(Poly2 p, FieldDomain dom, std::string label = "poly");

  double value(Vec2 p) const override { return poly_.eval(p); }
  Vec2 gradient(Vec2 p) const override { return {px_.eval(p), py_.eval(p)}; }
  std::array<double, 3> hessian(Vec2 p) const override {
    return {pxx_.eval(p), pxy_.eval(p), pyy_.eval(p)};
  }
  const FieldDomain& domain() const override { return dom_; }
  std::string describe() const override { return label_; }
  const Poly2* as_poly() const override { return &poly_; }

private:
  Poly2 poly_, px_, py_, pxx_, pxy_, pyy_;
  FieldDomain dom_;
  std::string label_;
};

class ExprField final : public ScalarField {
public:
  ExprField(FieldExpr e, FieldDomain dom, std::string label = "expr");

  double value(Vec2 p) const override { return expr_.value(p); }
  Vec2 gradient(Vec2 p) const override { return expr_.gradient(p); }
  std::array<double, 3> hessian(Vec2 p) const override {
    const Series2 s = expr_.taylor(p, 2);
    return {s.partial(2, 0), s.partial(1, 1), s.partial(0, 2)};
  }
  const FieldDomain& domain() const override { return dom_; }
  std::string describe() const override { return label_; }
  const FieldExpr* as_expr() const override { return &expr_; }

private:
  FieldExpr expr_;
  FieldDomain dom_;
  std::string label_;
};

class GridBackedField final : public ScalarField {
public:
  GridBackedField(GridField g, std::string label = "grid");

  double value(Vec2 p) const override { return grid_.eval(p); }
  Vec2 gradient(Vec2 p) const override { return grid_.gradient(p); }
  std::array<double, 3> hessian(Vec2 p) const override { return grid_.hessian(p); }
  const FieldDomain& domain() const override { return dom_; }
  std::string describe() const override { return label_; }
  const GridField* as_grid() const override { return &grid_; }

private:
  GridField grid_;
  FieldDomain dom_;
  std::string label_;
};

/// u_theta = cos(theta) u_x + sin(theta) u_y as a field in its own right.
class DirectionalDerivativeField final : public ScalarField {
public:
  DirectionalDerivativeField(std::shared_ptr<const ScalarField> base, double theta);

  double value(Vec2 p) const override;
  Vec2 gradient(Vec2 p) const override;
  std::array<double, 3> hessian(Vec2 p) const override;  // finite differences of the gradient
  const FieldDomain& domain() const override { return base_->domain(); }
  std::string describe() const override;

private:
  std::shared_ptr<const ScalarField> base_;
  double c_, s_, theta_;
};

/// Evaluate with a domain check (error point-outside-domain).
double eval_checked(const ScalarField& u, Vec2 p);

/// Laplacian(u)(p) + f(u(p)); zero iff u solves -Lap u = f(u) at p.
/// Exact for polynomials, analytic for expressions; for grids this is the
/// discrete stencil residual at the interior node nearest to p.
double pde_residual(const ScalarField& u, const Nonlinearity& f, Vec2 p);

/// Max |pde residual| over an interior sample grid, relative to max |u|.
/// Used as the gate deciding whether theorem checks are enforced.
bool verify_solution(const ScalarField& u, const Nonlinearity& f, double rel_tol = 1e-6);

}  // namespace morse2d
