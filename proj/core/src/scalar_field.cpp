#include "morse2d/scalar_field.hpp"

#include <cmath>

#include "morse2d/errors.hpp"

namespace morse2d {

double FieldDomain::distance_to_boundary(Vec2 p) const {
  const double dbox = box.border_distance(p);
  if (!level) return dbox;
  if (level(p) >= 0) return 0.0;
  double best = dbox;
  for (int k = 0; k < 16; ++k) {
    const double ang = 2.0 * M_PI * k / 16.0;
    const Vec2 dir{std::cos(ang), std::sin(ang)};
    // first sign change along the ray, then bisection
    double lo = 0.0, hi = dbox;
    const int steps = 64;
    double found = dbox;
    for (int s = 1; s <= steps; ++s) {
      const double t = dbox * s / steps;
      if (level(p + dir * t) >= 0) {
        hi = t;
        lo = dbox * (s - 1) / steps;
        for (int it = 0; it < 40; ++it) {
          const double mid = 0.5 * (lo + hi);
          (level(p + dir * mid) < 0 ? lo : hi) = mid;
        }
        found = 0.5 * (lo + hi);
        break;
      }
    }
    best = std::min(best, found);
  }
  return best;
}

PolyField::PolyField(Poly2 p, FieldDomain dom, std::string label)
    : poly_(std::move(p)),
      px_(poly_.derivative(1, 0)),
      py_(poly_.derivative(0, 1)),
      pxx_(poly_.derivative(2, 0)),
      pxy_(poly_.derivative(1, 1)),
      pyy_(poly_.derivative(0, 2)),
      dom_(std::move(dom)),
      label_(std::move(label)) {}

ExprField::ExprField(FieldExpr e, FieldDomain dom, std::string label)
    : expr_(std::move(e)), dom_(std::move(dom)), label_(std::move(label)) {}

GridBackedField::GridBackedField(GridField g, std::string label)
    : grid_(std::move(g)), label_(std::move(label)) {
  dom_.box = grid_.bbox();
  const GridField* gp = &grid_;
  dom_.level = [gp](Vec2 p) { return gp->evaluable(p) ? -1.0 : 1.0; };
}

DirectionalDerivativeField::DirectionalDerivativeField(std::shared_ptr<const ScalarField> base,
                                                       double theta)
    : base_(std::move(base)), c_(std::cos(theta)), s_(std::sin(theta)), theta_(theta) {}

double DirectionalDerivativeField::value(Vec2 p) const {
  const Vec2 g = base_->gradient(p);
  return c_ * g.x + s_ * g.y;
}

Vec2 DirectionalDerivativeField::gradient(Vec2 p) const {
  const auto h = base_->hessian(p);
  return {c_ * h[0] + s_ * h[1], c_ * h[1] + s_ * h[2]};
}

std::array<double, 3> DirectionalDerivativeField::hessian(Vec2 p) const {
  const double h = 1e-5 * std::max(1.0, domain().diameter());
  const Vec2 gxp = gradient({p.x + h, p.y}), gxm = gradient({p.x - h, p.y});
  const Vec2 gyp = gradient({p.x, p.y + h}), gym = gradient({p.x, p.y - h});
  return {(gxp.x - gxm.x) / (2 * h), (gyp.x - gym.x) / (2 * h), (gyp.y - gym.y) / (2 * h)};
}

std::string DirectionalDerivativeField::describe() const {
  return "d/dtheta[" + base_->describe() + "]";
}

double eval_checked(const ScalarField& u, Vec2 p) {
  if (!u.domain().contains(p)) fail("point-outside-domain", "evaluation point outside the field domain");
  return u.value(p);
}

namespace {

double grid_discrete_residual(const GridField& g, const Nonlinearity& f, Vec2 p) {
  // residual of the Shortley-Weller 5-point operator at the nearest interior node
  const int i = std::clamp(int(std::lround((p.x - g.origin().x) / g.hx())), 1, g.nx() - 2);
  const int j = std::clamp(int(std::lround((p.y - g.origin().y) / g.hy())), 1, g.ny() - 2);
  if (g.kind(i, j) != NodeKind::interior)
    fail("point-outside-domain", "no interior node near the requested point");
  const CutArms a = g.cut_arms() ? g.arm(i, j) : CutArms{};
  const double hx = g.hx(), hy = g.hy();
  const double uP = g.value(i, j);
  const double uW = g.value(i - 1, j), uE = g.value(i + 1, j);
  const double uS = g.value(i, j - 1), uN = g.value(i, j + 1);
  const double lap_x = 2.0 / (a.w * (a.w + a.e) * hx * hx) * uW +
                       2.0 / (a.e * (a.w + a.e) * hx * hx) * uE - 2.0 / (a.w * a.e * hx * hx) * uP;
  const double lap_y = 2.0 / (a.s * (a.s + a.n) * hy * hy) * uS +
                       2.0 / (a.n * (a.s + a.n) * hy * hy) * uN - 2.0 / (a.s * a.n * hy * hy) * uP;
  return lap_x + lap_y + f.value(uP);
}

}  // namespace

double pde_residual(const ScalarField& u, const Nonlinearity& f, Vec2 p) {
  if (!u.domain().contains(p)) fail("point-outside-domain", "pde residual outside the field domain");
  if (const Poly2* poly = u.as_poly()) {
    const Poly2 lap = poly->laplacian();
    return lap.eval(p) + f.value(poly->eval(p));
  }
  if (const GridField* g = u.as_grid()) return grid_discrete_residual(*g, f, p);
  const auto h = u.hessian(p);
  return h[0] + h[2] + f.value(u.value(p));
}

bool verify_solution(const ScalarField& u, const Nonlinearity& f, double rel_tol) {
  const Bounds b = u.domain().box;
  double scale = 0.0, worst = 0.0;
  int used = 0;
  const int n = 21;
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) {
      const Vec2 p{b.x0 + b.width() * i / n, b.y0 + b.height() * j / n};
      if (!u.domain().contains(p)) continue;
      double r;
      try {
        r = pde_residual(u, f, p);
        scale = std::max(scale, std::abs(u.value(p)));
      } catch (const Error&) {
        continue;
      }
      worst = std::max(worst, std::abs(r));
      ++used;
    }
  if (used == 0) return false;
  return worst <= rel_tol * std::max(scale, 1e-300);
}

}  // namespace morse2d
