#include "morse2d/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Lm2 {
  // Levenberg-damped Newton on grad u = 0, run to its numerical floor.
  // Degenerate zeros converge only linearly, so the loop keeps going while
  // the gradient norm improves at all; the flat directions then reach the
  // underflow floor instead of stalling at sqrt-of-tolerance offsets.
  static std::optional<Vec2> solve(const ScalarField& u, Vec2 p0, double accept_tol,
                                   double step_cap, const FieldDomain& dom) {
    Vec2 p = p0;
    double mu = 1e-4;
    Vec2 g;
    try {
      g = u.gradient(p);
    } catch (const Error&) {
      return std::nullopt;
    }
    double gn = g.norm();
    for (int it = 0; it < 400 && gn > 0.0; ++it) {
      std::array<double, 3> h;
      try {
        h = u.hessian(p);
      } catch (const Error&) {
        break;
      }
      // Levenberg step in the Hessian eigenbasis. A direction whose gradient
      // component is below rounding noise carries no information (tangent of
      // a critical circle or line); stepping there would amplify junk, so it
      // is frozen instead.
      const double a = h[0], b = h[1], c = h[2];
      const double s = a * a + 2 * b * b + c * c + 1e-300;
      const double hmean = 0.5 * (a + c), hdisc = std::hypot(0.5 * (a - c), b);
      const double lam[2] = {hmean - hdisc, hmean + hdisc};
      Vec2 q[2];
      {
        const Vec2 e1{b, lam[0] - a}, e2{lam[0] - c, b};
        Vec2 v = e1.norm() >= e2.norm() ? e1 : e2;
        if (v.norm() == 0) v = {1, 0};
        q[0] = v / v.norm();
        q[1] = {-q[0].y, q[0].x};
      }
      bool improved = false;
      for (int tries = 0; tries < 12; ++tries) {
        Vec2 d{0, 0};
        for (int e = 0; e < 2; ++e) {
          const double ge = q[e].dot(g);
          if (std::abs(ge) <= 32.0 * std::numeric_limits<double>::epsilon() * gn) continue;
          d += q[e] * (-ge * lam[e] / (lam[e] * lam[e] + mu * s));
        }
        const double dn = d.norm();
        if (dn == 0) break;
        if (dn > step_cap) d = d * (step_cap / dn);
        const Vec2 q = p + d;
        if (!dom.contains(q)) {
          mu *= 4;
          continue;
        }
        Vec2 gq;
        try {
          gq = u.gradient(q);
        } catch (const Error&) {
          mu *= 4;
          continue;
        }
        if (gq.norm() < gn) {
          p = q;
          g = gq;
          gn = gq.norm();
          // mu must be able to vanish: flat directions need the undamped
          // Newton step or they stall at sqrt-of-epsilon offsets
          mu = std::max(mu / 8, 1e-300);
          improved = true;
          break;
        }
        mu *= 4;
      }
      if (!improved) break;
    }
    return gn <= accept_tol ? std::optional<Vec2>(p) : std::nullopt;
  }
};

}  // namespace

std::string to_string(Isolation iso) {
  switch (iso) {
    case Isolation::isolated: return "isolated";
    case Isolation::cluster: return "cluster";
    case Isolation::curve_suspected: return "curve-suspected";
  }
  return "?";
}

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::nondegenerate_max: return "nondegenerate max";
    case PointClass::nondegenerate_min: return "nondegenerate min";
    case PointClass::nondegenerate_saddle: return "nondegenerate saddle";
    case PointClass::degenerate_max: return "degenerate max";
    case PointClass::degenerate_min: return "degenerate min";
    case PointClass::degenerate_saddle: return "degenerate saddle";
    case PointClass::non_isolated_extremum: return "non-isolated extremum";
    case PointClass::unclassified: return "unclassified";
  }
  return "?";
}

std::vector<CriticalPoint> find_critical_points(const ScalarField& u, const FieldDomain& dom,
                                                double seed_spacing) {
  const double spacing = seed_spacing > 0 ? seed_spacing : dom.diameter() / 48.0;
  const int nx = std::max(2, int(std::floor(dom.box.width() / spacing)) + 1);
  const int ny = std::max(2, int(std::floor(dom.box.height() / spacing)) + 1);

  std::vector<double> gn(size_t(nx) * ny, std::numeric_limits<double>::quiet_NaN());
  double grad_scale = 0;
  auto node = [&](int i, int j) {
    return Vec2{dom.box.x0 + spacing * i, dom.box.y0 + spacing * j};
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 p = node(i, j);
      if (!dom.contains(p)) continue;
      try {
        gn[size_t(j) * nx + i] = u.gradient(p).norm();
        grad_scale = std::max(grad_scale, gn[size_t(j) * nx + i]);
      } catch (const Error&) {
      }
    }
  if (grad_scale == 0) grad_scale = 1;
  const double tol = 1e-9 * grad_scale;

  std::vector<Vec2> zeros;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = gn[size_t(j) * nx + i];
      if (std::isnan(v)) continue;
      bool local_min = true;
      for (int dj = -1; dj <= 1 && local_min; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
          const double w = gn[size_t(b) * nx + a];
          if (!std::isnan(w) && w < v) {
            local_min = false;
            break;
          }
        }
      if (!local_min) continue;
      if (auto z = Lm2::solve(u, node(i, j), tol, 2.0 * spacing, dom)) zeros.push_back(*z);
    }

  std::sort(zeros.begin(), zeros.end(), [](Vec2 a, Vec2 b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  const double merge_radius = spacing / 2;
  std::vector<Vec2> kept;
  for (const Vec2& z : zeros) {
    bool dup = false;
    for (const Vec2& k : kept)
      if ((z - k).norm() < merge_radius) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(z);
  }

  std::vector<CriticalPoint> out;
  for (const Vec2& z : kept) {
    std::vector<Vec2> close;
    for (const Vec2& k : kept)
      if ((z - k).norm() <= 10 * merge_radius) close.push_back(k);
    Isolation iso = Isolation::isolated;
    if (close.size() >= 2) {
      iso = Isolation::cluster;
      if (close.size() >= 5) {
        // total-least-squares line fit
        Vec2 mean{0, 0};
        for (const Vec2& q : close) mean += q;
        mean = mean / double(close.size());
        double sxx = 0, sxy = 0, syy = 0;
        for (const Vec2& q : close) {
          const Vec2 d = q - mean;
          sxx += d.x * d.x;
          sxy += d.x * d.y;
          syy += d.y * d.y;
        }
        const double tr = sxx + syy, disc = std::hypot(sxx - syy, 2 * sxy);
        const double lmin = 0.5 * (tr - disc);
        const double rms = std::sqrt(std::max(0.0, lmin) / double(close.size()));
        if (rms < merge_radius) iso = Isolation::curve_suspected;
      }
    }
    double g = 0;
    try {
      g = u.gradient(z).norm();
    } catch (const Error&) {
    }
    out.push_back({z, g, iso});
  }
  return out;
}

namespace {

enum class CircleVerdict { negative, positive, mixed, flat };

CircleVerdict circle_verdict(const ScalarField& u, Vec2 p, double r, double u0) {
  int pos = 0, neg = 0;
  double scale = 0;
  std::vector<double> vals;
  vals.reserve(96);
  for (int k = 0; k < 96; ++k) {
    const double t = 2 * M_PI * k / 96;
    const double v = u.value({p.x + r * std::cos(t), p.y + r * std::sin(t)}) - u0;
    vals.push_back(v);
    scale = std::max(scale, std::abs(v));
  }
  const double tol = std::max(1e-12 * scale, 16 * kEps * std::abs(u0));
  for (const double v : vals) {
    if (v > tol) ++pos;
    if (v < -tol) ++neg;
  }
  if (pos && neg) return CircleVerdict::mixed;
  if (pos) return CircleVerdict::positive;
  if (neg) return CircleVerdict::negative;
  return CircleVerdict::flat;
}

void record(std::vector<std::string>& v, const std::string& name) {
  if (std::find(v.begin(), v.end(), name) == v.end()) v.push_back(name);
}

}  // namespace

CriticalPointReport classify_point(const ScalarField& u, const CriticalPoint& p,
                                   const Nonlinearity* f, const ClassifySettings& settings) {
  CriticalPointReport rpt;
  rpt.point = p;
  rpt.value_at_point = u.value(p.location);

  // jet at the best order the domain permits
  std::optional<TaylorJet> jet;
  for (int order = settings.jet_order; order >= 2; order -= 2) {
    try {
      jet = best_jet(u, p.location, order);
      break;
    } catch (const Error& e) {
      if (std::string(e.code()) != "stencil-outside-domain" || order == 2) throw;
    }
  }
  const double gtol = 2.0 * (p.gradient_norm + jet->err(1, 0) + jet->err(0, 1)) +
                      1e-9 * std::max(jet->order_scale(1), jet->order_scale(2)) + 1e-14;
  NormalForm nf = rotate_to_normal_form(*jet, gtol);
  rpt.hessian_eigenvalues = nf.hessian_eigenvalues;
  rpt.rotation_angle = nf.theta;
  rpt.u_yy = nf.u_yy();
  rpt.jet = nf.jet;

  if (f) rpt.solution_verified = verify_solution(u, *f, settings.solution_gate_rel);

  auto compute_index = [&]() {
    if (!settings.with_index || p.isolation == Isolation::curve_suspected) return;
    try {
      rpt.index = robust_index(u, p.location);
    } catch (const Error&) {
    }
  };

  if (!nf.degenerate) {
    const double l1 = nf.hessian_eigenvalues[0], l2 = nf.hessian_eigenvalues[1];
    rpt.cls = l2 < 0 ? PointClass::nondegenerate_max
                     : (l1 > 0 ? PointClass::nondegenerate_min : PointClass::nondegenerate_saddle);
    compute_index();
    if (rpt.index && (rpt.cls == PointClass::nondegenerate_max || rpt.cls == PointClass::nondegenerate_min) &&
        rpt.index->value != 1)
      record(rpt.theorem_violations, "extremum-index-not-1");
    if (rpt.index && rpt.cls == PointClass::nondegenerate_saddle && rpt.index->value != -1)
      record(rpt.theorem_violations, "nondegenerate-saddle-index-not-minus-1");
    return rpt;
  }

  // ---- degenerate branch ----
  const bool kernel_degenerate = nf.zero_eigenvalues == 2;

  try {
    const OrderN on = minimal_order_n(nf);
    rpt.n = on.n;
    rpt.n_odd = on.n % 2 != 0;
    rpt.alpha = on.alpha;
    rpt.beta = on.beta;
  } catch (const Error& e) {
    if (std::string(e.code()) != "order-exhausted") throw;
  }

  // max/min/saddle by sampling on shrinking circles
  const double r0 = std::min(0.5 * u.domain().distance_to_boundary(p.location),
                             0.05 * u.domain().diameter());
  CircleVerdict verdicts[3] = {circle_verdict(u, p.location, r0, rpt.value_at_point),
                               circle_verdict(u, p.location, r0 / 2, rpt.value_at_point),
                               circle_verdict(u, p.location, r0 / 4, rpt.value_at_point)};
  const bool all_same = verdicts[0] == verdicts[1] && verdicts[1] == verdicts[2];
  PointClass local = PointClass::unclassified;
  if (all_same) {
    switch (verdicts[0]) {
      case CircleVerdict::negative: local = PointClass::degenerate_max; break;
      case CircleVerdict::positive: local = PointClass::degenerate_min; break;
      case CircleVerdict::mixed: local = PointClass::degenerate_saddle; break;
      case CircleVerdict::flat: local = PointClass::unclassified; break;
    }
  }
  const bool is_max = local == PointClass::degenerate_max;
  const bool is_min = local == PointClass::degenerate_min;
  if (p.isolation == Isolation::curve_suspected && (is_max || is_min))
    rpt.cls = PointClass::non_isolated_extremum;
  else
    rpt.cls = local;

  compute_index();

  // zero thresholds tied to the jet's own error estimates
  const TaylorJet& J = nf.jet;
  auto sign_with_zero = [&](int a, int b) -> int {
    if (J.is_zero_coeff(a, b)) return 0;
    return J.coeff(a, b) > 0 ? 1 : -1;
  };

  // u_yy sign facts
  const int uyy_sign = sign_with_zero(0, 2);
  if (is_max || (rpt.cls == PointClass::non_isolated_extremum && is_max)) {
    if (uyy_sign >= 0) record(rpt.theorem_violations, "uyy-not-negative-at-max");
  }
  if (is_min || (rpt.cls == PointClass::non_isolated_extremum && is_min)) {
    if (uyy_sign <= 0) record(rpt.theorem_violations, "uyy-not-positive-at-min");
  }

  // order-n sign facts and the pure-x order l
  if (rpt.n) {
    const int n = *rpt.n;
    const int alpha_sign = sign_with_zero(n, 0);
    const int beta_sign = sign_with_zero(n - 1, 1);
    if (alpha_sign == 0 && beta_sign == 0 && !kernel_degenerate && rpt.solution_verified)
      record(rpt.theorem_violations, "alpha-beta-both-zero");

    if ((is_max || is_min) && n % 2 == 0) {
      if (is_max && alpha_sign >= 0) record(rpt.theorem_violations, "alpha-not-negative-even-max");
      if (is_min && alpha_sign <= 0) record(rpt.theorem_violations, "alpha-not-positive-even-min");
    }
    if ((is_max || is_min) && n % 2 == 1) {
      if (alpha_sign != 0) record(rpt.theorem_violations, "alpha-nonzero-odd-extremum");
      if (beta_sign == 0) record(rpt.theorem_violations, "beta-zero-odd-extremum");
    }

    // l applies on the alpha = 0 branch (odd n)
    if (n % 2 == 1 && alpha_sign == 0 && J.order() >= 2 * n - 2) {
      try {
        const OrderL ol = first_pure_x_order_l(nf, n);
        rpt.l = ol.l;
        rpt.pure_x_coeff_at_l = ol.coeff;
        if (is_max && ol.coeff >= 0) record(rpt.theorem_violations, "pure-x-not-negative-at-max");
        if (is_min && ol.coeff <= 0) record(rpt.theorem_violations, "pure-x-not-positive-at-min");
      } catch (const Error& e) {
        if (std::string(e.code()) != "no-such-l") throw;
        if (is_max || is_min) record(rpt.theorem_violations, "no-pure-x-order-l");
      }
    }

    // inequality at l = 2n-2, equality on the non-isolated branch
    if (rpt.l && *rpt.l == 2 * n - 2) {
      const double slack = check_inequality_1_8(rpt.u_yy, *rpt.beta, *rpt.pure_x_coeff_at_l, n);
      rpt.inequality_1_8_slack = slack;
      const double scale =
          std::max({(*rpt.beta) * (*rpt.beta), std::abs(rpt.u_yy * *rpt.pure_x_coeff_at_l), 1e-30});
      if ((is_max || is_min) && slack < -1e-5 * scale)
        record(rpt.theorem_violations, "inequality-1-8-violated");
      if (rpt.cls == PointClass::non_isolated_extremum) {
        rpt.equality_1_8_gap = std::abs(slack);
        if (std::abs(slack) > 1e-5 * scale)
          record(rpt.theorem_violations, "non-isolated-equality-gap");
      }
    }
    if (rpt.cls == PointClass::non_isolated_extremum) {
      if (n % 2 == 0) record(rpt.theorem_violations, "non-isolated-n-even");
      if (rpt.l && *rpt.l != 2 * n - 2) record(rpt.theorem_violations, "non-isolated-l-not-2n-2");
    }

    // harmonic chain residuals
    if (J.order() >= n) rpt.chain_residuals = check_harmonic_chain(J, n, kernel_degenerate);
  }

  // index gates
  if (rpt.index) {
    const int idx = rpt.index->value;
    if ((is_max || is_min) && idx != 1) record(rpt.theorem_violations, "extremum-index-not-1");
    if (kernel_degenerate && idx >= -1)
      record(rpt.theorem_violations, "kernel-degenerate-index-above-minus-2");
    if (!kernel_degenerate && rpt.cls == PointClass::degenerate_saddle && rpt.n) {
      const int alpha_sign = sign_with_zero(*rpt.n, 0);
      if (idx == -1 && *rpt.n % 2 == 0 && alpha_sign != 0 && alpha_sign * uyy_sign >= 0)
        record(rpt.theorem_violations, "saddle-sign-law-violated");
      if (idx == -1 && *rpt.n % 2 == 1 && alpha_sign != 0)
        record(rpt.theorem_violations, "saddle-odd-alpha-nonzero");
    }
  }

  if (settings.with_expansion_slope && rpt.cls != PointClass::unclassified) {
    std::vector<double> radii;
    for (int k = 0; k < 6; ++k) radii.push_back(r0 * std::pow(0.5, k));
    try {
      const SlopeFit fit = expansion_residual_slope(u, rpt, radii);
      rpt.expansion_exact = fit.exact;
      if (!fit.exact) rpt.expansion_residual_slope = fit.slope;
    } catch (const Error&) {
    }
  }
  return rpt;
}

SlopeFit expansion_residual_slope(const ScalarField& u, const CriticalPointReport& rpt,
                                  std::span<const double> radii) {
  SlopeFit fit;
  const Vec2 p = rpt.point.location;
  const double c = std::cos(rpt.rotation_angle), s = std::sin(rpt.rotation_angle);
  const double u0 = rpt.value_at_point;

  const bool odd_case = rpt.n && *rpt.n % 2 == 1 && rpt.l &&
                        (rpt.cls == PointClass::degenerate_max ||
                         rpt.cls == PointClass::degenerate_min ||
                         rpt.cls == PointClass::non_isolated_extremum);

  auto model_terms = [&](double xi, double eta) {
    double m = 0.5 * rpt.u_yy * eta * eta;
    if (rpt.n) {
      const int n = *rpt.n;
      double fact = 1;
      for (int i = 2; i <= n; ++i) fact *= i;
      // Re(z^n), Im(z^n) at (xi, eta)
      double re = 1, im = 0;
      for (int i = 0; i < n; ++i) {
        const double nre = re * xi - im * eta;
        im = re * eta + im * xi;
        re = nre;
      }
      m += (rpt.alpha.value_or(0) / fact) * re + (rpt.beta.value_or(0) / fact) * im;
      if (rpt.l) {
        const int l = *rpt.l;
        double lfact = 1;
        for (int i = 2; i <= l; ++i) lfact *= i;
        double rel = 1, iml = 0;
        for (int i = 0; i < l; ++i) {
          const double nre = rel * xi - iml * eta;
          iml = rel * eta + iml * xi;
          rel = nre;
        }
        m += (*rpt.pure_x_coeff_at_l / lfact) * rel;
      }
    }
    return m;
  };
  auto world = [&](double xi, double eta) {
    return Vec2{p.x + xi * c - eta * s, p.y + xi * s + eta * c};
  };

  double uscale = std::abs(u0);
  for (const double r : radii) {
    double worst = 0;
    for (int k = 0; k < 128; ++k) {
      const double t = 2 * M_PI * k / 128;
      const double xi = r * std::cos(t), eta = r * std::sin(t);
      const Vec2 q = world(xi, eta);
      if (!u.domain().contains(q)) fail("radii-outside-domain", "expansion circle leaves the domain");
      double model;
      if (odd_case) {
        // exact pure-y subtraction: the (u_yy/2 + o(1)) y^2 coefficient of the
        // expansion absorbs every pure-y term, so compare against u on the
        // eta-axis plus the cross terms of the model.
        const double pure_y = u.value(world(0.0, eta));
        model = pure_y + (model_terms(xi, eta) - model_terms(0.0, eta));
      } else {
        model = u0 + model_terms(xi, eta);
      }
      const double v = u.value(q);
      uscale = std::max(uscale, std::abs(v));
      worst = std::max(worst, std::abs(v - model));
    }
    fit.radii.push_back(r);
    fit.residuals.push_back(worst);
  }

  const double floor = 256 * kEps * std::max(uscale, 1e-30);
  std::vector<double> lx, ly;
  for (size_t k = 0; k < fit.radii.size(); ++k) {
    if (fit.residuals[k] <= floor) continue;
    lx.push_back(std::log(fit.radii[k]));
    ly.push_back(std::log(fit.residuals[k]));
  }
  if (lx.size() < 3) {
    fit.exact = true;
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = int(lx.size());
  for (int k = 0; k < m; ++k) {
    sx += lx[size_t(k)];
    sy += ly[size_t(k)];
    sxx += lx[size_t(k)] * lx[size_t(k)];
    sxy += lx[size_t(k)] * ly[size_t(k)];
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

}  // namespace morse2d
