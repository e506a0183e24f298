#include "morse2d/jets.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// centered O(h^2) stencils for d^m/dt^m, offsets -K(m)..K(m)
struct Stencil {
  int halfwidth;
  double w[7];  // indexed by offset + halfwidth
  double abs_sum;
};

const Stencil& stencil_for(int m) {
  static const Stencil s[7] = {
      {0, {1}, 1},
      {1, {-0.5, 0, 0.5}, 1},
      {1, {1, -2, 1}, 4},
      {2, {-0.5, 1, 0, -1, 0.5}, 3},
      {2, {1, -4, 6, -4, 1}, 16},
      {3, {-0.5, 2, -2.5, 0, 2.5, -2, 0.5}, 10},
      {3, {1, -6, 15, -20, 15, -6, 1}, 64},
  };
  return s[m];
}

}  // namespace

TaylorJet::TaylorJet(Vec2 center, int order)
    : center_(center), order_(order) {
  if (order < 0 || order > 8) fail("jet-order-too-small", "jet order out of range");
  const size_t n = size_t(order + 1) * size_t(order + 2) / 2;
  coeff_.assign(n, 0.0);
  err_.assign(n, 0.0);
}

size_t TaylorJet::idx(int a, int b) const {
  const int s = a + b;
  if (a < 0 || b < 0 || s > order_) fail("jet-order-too-small", "jet coefficient out of range");
  return size_t(s) * size_t(s + 1) / 2 + size_t(b);
}

const Rational& TaylorJet::exact_coeff(int a, int b) const {
  static const Rational zero{0};
  if (!exact_) fail("jet-order-too-small", "jet has no exact coefficients");
  return rat_.empty() ? zero : rat_[idx(a, b)];
}

void TaylorJet::set_exact(int a, int b, Rational v) {
  if (!exact_) make_exact();
  coeff_[idx(a, b)] = to_double(v);
  rat_[idx(a, b)] = std::move(v);
}

void TaylorJet::make_exact() {
  exact_ = true;
  rat_.assign(coeff_.size(), Rational(0));
  err_.assign(err_.size(), 0.0);
}

void TaylorJet::drop_exact() {
  exact_ = false;
  rat_.clear();
}

double TaylorJet::order_scale(int m) const {
  double s = 0;
  for (int b = 0; b <= m; ++b) s = std::max(s, std::abs(coeff_[idx(m - b, b)]));
  return s;
}

bool TaylorJet::is_zero_coeff(int a, int b) const {
  if (exact_) return rat_[idx(a, b)] == 0;
  if (coeff(a, b) == 0.0) return true;
  // The same-order scale alone goes vacuous at numerically located critical
  // points, where position error leaves every same-order coefficient equally
  // tiny; the largest coefficient across orders (unit-length yardstick)
  // supplies the missing reference.
  double cross = 0;
  for (int m = 0; m <= order_; ++m) cross = std::max(cross, order_scale(m));
  const double thresh =
      std::max({10.0 * err(a, b), 1e-9 * order_scale(a + b), 1e-9 * cross});
  return std::abs(coeff(a, b)) < thresh;
}

TaylorJet jet_exact(const Poly2& p, Vec2 center, int order) {
  TaylorJet j(center, order);
  j.make_exact();
  const Rational cx(center.x), cy(center.y);  // doubles are exact rationals
  for (int m = 0; m <= order; ++m)
    for (int b = 0; b <= m; ++b) {
      const int a = m - b;
      j.set_exact(a, b, p.derivative(a, b).eval(cx, cy));
    }
  return j;
}

TaylorJet jet_analytic(const FieldExpr& e, Vec2 center, int order) {
  const Series2 s = e.taylor(center, order);
  TaylorJet j(center, order);
  for (int m = 0; m <= order; ++m) {
    for (int b = 0; b <= m; ++b) j.coeff(m - b, b) = s.partial(m - b, b);
    const double scale = j.order_scale(m);
    for (int b = 0; b <= m; ++b) j.err(m - b, b) = 4.0 * kEps * scale;
  }
  return j;
}

namespace {

double tensor_fd(const ScalarField& u, Vec2 c, int a, int b, double h,
                 std::map<std::pair<int, int>, double>& cache, double step_unit) {
  // samples are cached on the lattice of step_unit = h/2 multiples
  const Stencil& sa = stencil_for(a);
  const Stencil& sb = stencil_for(b);
  const int mult = int(std::lround(h / step_unit));
  double sum = 0;
  for (int i = -sa.halfwidth; i <= sa.halfwidth; ++i) {
    const double wa = sa.w[i + sa.halfwidth];
    if (wa == 0) continue;
    for (int jj = -sb.halfwidth; jj <= sb.halfwidth; ++jj) {
      const double wb = sb.w[jj + sb.halfwidth];
      if (wb == 0) continue;
      const std::pair<int, int> key{i * mult, jj * mult};
      auto it = cache.find(key);
      double v;
      if (it != cache.end()) {
        v = it->second;
      } else {
        v = u.value({c.x + key.first * step_unit, c.y + key.second * step_unit});
        cache.emplace(key, v);
      }
      sum += wa * wb * v;
    }
  }
  return sum / std::pow(h, a + b);
}

}  // namespace

TaylorJet jet_numeric(const ScalarField& u, Vec2 center, int order, double h0) {
  if (order > 6) fail("jet-order-too-small", "numeric jets support order <= 6");
  const FieldDomain& dom = u.domain();
  const double diam = dom.diameter();
  const GridField* grid = u.as_grid();

  TaylorJet j(center, order);
  double umax = std::abs(u.value(center));

  for (int m = 0; m <= order; ++m) {
    double h = h0 > 0 ? h0 : std::pow(kEps, 1.0 / (m + 2)) * diam;
    if (grid) {
      const double hg = std::max(grid->hx(), grid->hy());
      const double snapped = std::max(4.0, 2.0 * std::ceil(h / (2.0 * hg))) * hg;
      h = snapped;
    }
    if (m == 0) {
      j.coeff(0, 0) = u.value(center);
      continue;
    }
    // stencil must fit at both Richardson levels
    const int K = stencil_for(m).halfwidth;
    const Vec2 corners[4] = {{center.x + K * h, center.y + K * h},
                             {center.x - K * h, center.y + K * h},
                             {center.x + K * h, center.y - K * h},
                             {center.x - K * h, center.y - K * h}};
    for (const Vec2& q : corners)
      if (!dom.contains(q))
        fail("stencil-outside-domain", "finite-difference stencil leaves the domain");

    std::map<std::pair<int, int>, double> cache;
    const double step_unit = h / 2;
    for (int b = 0; b <= m; ++b) {
      const int a = m - b;
      const double Eh = tensor_fd(u, center, a, b, h, cache, step_unit);
      const double Eh2 = tensor_fd(u, center, a, b, h / 2, cache, step_unit);
      const double extrap = (4.0 * Eh2 - Eh) / 3.0;
      const double wsum = stencil_for(a).abs_sum * stencil_for(b).abs_sum;
      for (const auto& [k, v] : cache) umax = std::max(umax, std::abs(v));
      const double floor = 8.0 * kEps * wsum * umax / std::pow(h / 2, m);
      j.coeff(a, b) = extrap;
      j.err(a, b) = std::max(std::abs(Eh2 - Eh), floor);
    }
  }

  bool any_signal = false;
  for (int m = 1; m <= order; ++m)
    for (int b = 0; b <= m; ++b)
      if (j.err(m - b, b) < std::abs(j.coeff(m - b, b))) any_signal = true;
  if (!any_signal) fail("noise-dominated", "every jet coefficient is below its error estimate");
  return j;
}

TaylorJet best_jet(const ScalarField& u, Vec2 center, int order) {
  if (const Poly2* p = u.as_poly()) return jet_exact(*p, center, order);
  if (const FieldExpr* e = u.as_expr()) return jet_analytic(*e, center, order);
  return jet_numeric(u, center, order);
}

TaylorJet rotate_jet(const TaylorJet& j, double c, double s,
                     const std::optional<std::pair<Rational, Rational>>& exact_cs) {
  const int N = j.order();
  TaylorJet out(j.center(), N);
  const bool exact = j.exact() && exact_cs.has_value();
  if (exact) out.make_exact();

  for (int m = 0; m <= N; ++m) {
    for (int b = 0; b <= m; ++b) {
      const int a = m - b;
      // expand (c dx + s dy)^a (-s dx + c dy)^b over dx^i dy^(m-i)
      std::vector<double> op(size_t(m) + 1, 0.0);
      op[0] = 1.0;
      std::vector<Rational> rop;
      if (exact) {
        rop.assign(size_t(m) + 1, Rational(0));
        rop[0] = 1;
      }
      auto mul_linear = [&](double fx, double fy, const Rational& rx, const Rational& ry,
                            int current) {
        std::vector<double> nop(size_t(m) + 1, 0.0);
        std::vector<Rational> nrop;
        if (exact) nrop.assign(size_t(m) + 1, Rational(0));
        for (int i = 0; i <= current; ++i) {
          if (op[size_t(i)] != 0.0 || (exact && rop[size_t(i)] != 0)) {
            nop[size_t(i) + 1] += op[size_t(i)] * fx;
            nop[size_t(i)] += op[size_t(i)] * fy;
            if (exact) {
              nrop[size_t(i) + 1] += rop[size_t(i)] * rx;
              nrop[size_t(i)] += rop[size_t(i)] * ry;
            }
          }
        }
        op = std::move(nop);
        if (exact) rop = std::move(nrop);
      };
      // op[i] multiplies dx^i dy^(applied - i)
      int applied = 0;
      const Rational rc = exact ? exact_cs->first : Rational(0);
      const Rational rs = exact ? exact_cs->second : Rational(0);
      for (int t = 0; t < a; ++t) mul_linear(c, s, rc, rs, applied++);
      for (int t = 0; t < b; ++t) mul_linear(-s, c, -rs, rc, applied++);

      double v = 0, ev = 0;
      Rational rv{0};
      for (int i = 0; i <= m; ++i) {
        const int ox = i, oy = m - i;
        v += op[size_t(i)] * j.coeff(ox, oy);
        ev += std::abs(op[size_t(i)]) * j.err(ox, oy);
        if (exact) rv += rop[size_t(i)] * j.exact_coeff(ox, oy);
      }
      if (exact) {
        out.set_exact(a, b, rv);
        out.err(a, b) = 0.0;
      } else {
        out.coeff(a, b) = v;
        if (j.exact()) ev = std::max(ev, 8.0 * kEps * std::abs(v));
        out.err(a, b) = ev;
      }
    }
  }
  return out;
}

NormalForm rotate_to_normal_form(const TaylorJet& j, double grad_tol) {
  if (std::hypot(j.coeff(1, 0), j.coeff(0, 1)) > grad_tol)
    fail("not-a-critical-point", "jet gradient exceeds the critical-point tolerance");
  if (j.order() < 2) fail("jet-order-too-small", "normal form needs a second-order jet");

  const double a = j.coeff(2, 0), b = j.coeff(1, 1), cc = j.coeff(0, 2);
  const double mean = 0.5 * (a + cc);
  const double disc = std::hypot(0.5 * (a - cc), b);
  const double l1 = mean - disc, l2 = mean + disc;  // ascending

  // The exact vanishing test applies only when the center is exactly
  // critical; a Newton-located center carries position error that perturbs
  // the Hessian by about sqrt(|grad| * third-order scale).
  const bool exactly_critical =
      j.exact() && j.exact_coeff(1, 0) == 0 && j.exact_coeff(0, 1) == 0;

  bool degenerate;
  int zeros;
  if (exactly_critical) {
    const Rational ra = j.exact_coeff(2, 0), rb = j.exact_coeff(1, 1), rc2 = j.exact_coeff(0, 2);
    const Rational det = ra * rc2 - rb * rb;
    degenerate = det == 0;
    zeros = !degenerate ? 0 : ((ra == 0 && rb == 0 && rc2 == 0) ? 2 : 1);
  } else {
    const double gradn = std::hypot(j.coeff(1, 0), j.coeff(0, 1));
    const double scale3 = j.order() >= 3 ? j.order_scale(3) : 0.0;
    const double pert = 3.0 * std::sqrt(gradn * scale3);
    const double errs = 10.0 * (j.err(2, 0) + j.err(1, 1) + j.err(0, 2));
    auto near_zero = [&](double lam, double other) {
      return std::abs(lam) <= std::max({1e-7 * std::max(1.0, std::abs(other)), pert, errs});
    };
    zeros = int(near_zero(l1, l2)) + int(near_zero(l2, l1));
    degenerate = zeros > 0;
  }

  // kernel (or principal-axis) direction for the new x-axis
  double vx = 1.0, vy = 0.0;
  std::optional<std::pair<Rational, Rational>> exact_cs;
  auto robust_eigvec = [&](double lz) {
    // (H - lz I) v = 0: both cofactor rows; pick the better conditioned
    const double e1x = b, e1y = lz - a;
    const double e2x = lz - cc, e2y = b;
    if (std::hypot(e1x, e1y) >= std::hypot(e2x, e2y)) {
      vx = e1x;
      vy = e1y;
    } else {
      vx = e2x;
      vy = e2y;
    }
    if (std::hypot(vx, vy) == 0) {
      vx = 1;
      vy = 0;
    }
  };
  if (degenerate && exactly_critical) {
    const Rational ra = j.exact_coeff(2, 0), rb = j.exact_coeff(1, 1);
    if (ra == 0 && rb == 0) {
      exact_cs = std::make_pair(Rational(1), Rational(0));
    } else {
      Rational kx = -rb, ky = ra;
      if (kx < 0 || (kx == 0 && ky < 0)) {
        kx = -kx;
        ky = -ky;
      }
      if (auto root = rational_sqrt(kx * kx + ky * ky))
        exact_cs = std::make_pair(kx / *root, ky / *root);
      vx = to_double(kx);
      vy = to_double(ky);
    }
    if (exact_cs) {
      vx = to_double(exact_cs->first);
      vy = to_double(exact_cs->second);
    }
  } else if (degenerate) {
    if (zeros == 2) {
      vx = 1;
      vy = 0;
    } else {
      robust_eigvec(std::abs(l1) <= std::abs(l2) ? l1 : l2);
    }
  } else {
    if (b == 0.0) {
      // already principal; keep the axes (exactly, on the exact path)
      vx = 1;
      vy = 0;
      if (j.exact()) exact_cs = std::make_pair(Rational(1), Rational(0));
    } else {
      robust_eigvec(std::abs(l1) <= std::abs(l2) ? l1 : l2);
    }
  }

  const double norm = std::hypot(vx, vy);
  double cth = vx / norm, sth = vy / norm;
  if (cth < 0 || (cth == 0 && sth < 0)) {
    cth = -cth;
    sth = -sth;
  }

  NormalForm nf{std::atan2(sth, cth), rotate_jet(j, cth, sth, exact_cs), {l1, l2}, degenerate,
                zeros};
  return nf;
}

OrderN minimal_order_n(const NormalForm& nf) {
  const TaylorJet& j = nf.jet;
  for (int n = 3; n <= j.order(); ++n) {
    for (int k = 0; k <= n - 1; ++k) {
      if (!j.is_zero_coeff(n - k, k))
        return {n, j.coeff(n, 0), j.coeff(n - 1, 1)};
    }
  }
  fail("order-exhausted",
       "no nonvanishing mixed derivative up to the jet order (pure 1D profile or order too small)");
}

OrderL first_pure_x_order_l(const NormalForm& nf, int n) {
  if (n % 2 == 0) fail("wrong-parity", "the pure-x order l applies to odd n only");
  if (nf.jet.order() < 2 * n - 2) fail("jet-order-too-small", "need jet order >= 2n-2");
  for (int l = n + 1; l <= 2 * n - 2; ++l)
    if (!nf.jet.is_zero_coeff(l, 0)) return {l, nf.jet.coeff(l, 0)};
  fail("no-such-l", "all pure-x derivatives vanish in [n+1, 2n-2]");
}

std::vector<double> check_harmonic_chain(const TaylorJet& j, int n, bool kernel_degenerate) {
  if (j.order() < n) fail("jet-order-too-small", "chain check needs jet order >= n");
  std::vector<double> res;
  const int even_top = kernel_degenerate ? n / 2 : (n - 1) / 2;
  const int odd_top = kernel_degenerate ? (n - 1) / 2 : (n - 2) / 2;
  if (j.exact()) {
    const Rational alpha = j.exact_coeff(n, 0);
    const Rational beta = n >= 1 ? j.exact_coeff(n - 1, 1) : Rational(0);
    for (int h = 1; h <= even_top; ++h) {
      Rational expect = (h % 2) ? -alpha : alpha;
      res.push_back(std::abs(to_double(j.exact_coeff(n - 2 * h, 2 * h) - expect)));
    }
    for (int h = 1; h <= odd_top; ++h) {
      Rational expect = (h % 2) ? -beta : beta;
      res.push_back(std::abs(to_double(j.exact_coeff(n - 2 * h - 1, 2 * h + 1) - expect)));
    }
    return res;
  }
  const double alpha = j.coeff(n, 0);
  const double beta = j.coeff(n - 1, 1);
  for (int h = 1; h <= even_top; ++h)
    res.push_back(std::abs(j.coeff(n - 2 * h, 2 * h) - ((h % 2) ? -alpha : alpha)));
  for (int h = 1; h <= odd_top; ++h)
    res.push_back(std::abs(j.coeff(n - 2 * h - 1, 2 * h + 1) - ((h % 2) ? -beta : beta)));
  return res;
}

double check_inequality_1_8(double u_yy, double beta, double coeff_2n2, int n) {
  if (n % 2 == 0) fail("wrong-parity", "inequality applies to odd n");
  double num = 2.0, den = 1.0;
  for (int i = 1; i <= n - 1; ++i) num *= i * i;  // 2((n-1)!)^2
  for (int i = 1; i <= 2 * n - 2; ++i) den *= i;  // (2n-2)!
  return num / den * u_yy * coeff_2n2 - beta * beta;
}

}  // namespace morse2d
