#include "morse2d/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "morse2d/errors.hpp"
#include "morse2d/field_io.hpp"

namespace morse2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EdgeId {
  int i, j;
  bool vertical;
  bool operator<(const EdgeId& o) const {
    return std::tie(i, j, vertical) < std::tie(o.i, o.j, o.vertical);
  }
};

struct Segment {
  EdgeId a, b;
};

/// Samples u - c on the node lattice; NaN outside the domain.
struct SampleGrid {
  int nx, ny;
  double cell;
  Vec2 origin;
  std::vector<double> v;

  double at(int i, int j) const { return v[size_t(j) * nx + i]; }
  Vec2 node(int i, int j) const { return {origin.x + cell * i, origin.y + cell * j}; }
};

SampleGrid sample_field(const ScalarField& u, double c, const FieldDomain& dom, double cell) {
  SampleGrid g;
  g.cell = cell;
  g.nx = int(std::floor(dom.box.width() / cell)) + 1;
  g.ny = int(std::floor(dom.box.height() / cell)) + 1;
  if (g.nx < 2 || g.ny < 2) fail("level-out-of-range", "tracing box too small for the cell size");
  g.origin = {dom.box.x0, dom.box.y0};
  g.v.assign(size_t(g.nx) * g.ny, kNaN);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 p = g.node(i, j);
      if (!dom.contains(p)) continue;
      try {
        g.v[size_t(j) * g.nx + i] = u.value(p) - c;
      } catch (const Error&) {
      }
    }
  return g;
}

Vec2 edge_crossing(const SampleGrid& g, const EdgeId& e) {
  const Vec2 p0 = g.node(e.i, e.j);
  const double v0 = g.at(e.i, e.j);
  const double v1 = e.vertical ? g.at(e.i, e.j + 1) : g.at(e.i + 1, e.j);
  double t = v0 / (v0 - v1);
  t = std::clamp(t, 0.0, 1.0);
  return e.vertical ? Vec2{p0.x, p0.y + t * g.cell} : Vec2{p0.x + t * g.cell, p0.y};
}

}  // namespace

std::vector<LevelCurve> extract_level(const ScalarField& u, double c, const FieldDomain& dom,
                                      double cell, CurveKind kind) {
  const SampleGrid g = sample_field(u, c, dom, cell);

  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (const double v : g.v)
    if (!std::isnan(v)) {
      vmin = std::min(vmin, v + c);
      vmax = std::max(vmax, v + c);
    }
  if (kind == CurveKind::level_of_u && !(vmin < c && c < vmax))
    fail("level-out-of-range", "level is not strictly between the field extremes on the domain");

  // per-cell segments
  std::multimap<EdgeId, std::pair<EdgeId, size_t>> adj;
  std::vector<Segment> segs;
  auto add_seg = [&](EdgeId a, EdgeId b) {
    const size_t id = segs.size();
    segs.push_back({a, b});
    adj.emplace(a, std::make_pair(b, id));
    adj.emplace(b, std::make_pair(a, id));
  };

  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double v00 = g.at(i, j), v10 = g.at(i + 1, j), v11 = g.at(i + 1, j + 1),
                   v01 = g.at(i, j + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;
      const int code = (v00 > 0 ? 1 : 0) | (v10 > 0 ? 2 : 0) | (v11 > 0 ? 4 : 0) | (v01 > 0 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const EdgeId bottom{i, j, false}, top{i, j + 1, false}, left{i, j, true},
          right{i + 1, j, true};
      switch (code) {
        case 1:
        case 14: add_seg(left, bottom); break;
        case 2:
        case 13: add_seg(bottom, right); break;
        case 3:
        case 12: add_seg(left, right); break;
        case 4:
        case 11: add_seg(right, top); break;
        case 6:
        case 9: add_seg(bottom, top); break;
        case 7:
        case 8: add_seg(left, top); break;
        case 5:
        case 10: {
          // ambiguous: resolve with the cell center
          double center;
          try {
            center = u.value({g.origin.x + (i + 0.5) * g.cell, g.origin.y + (j + 0.5) * g.cell}) - c;
          } catch (const Error&) {
            center = 0.25 * (v00 + v10 + v11 + v01);
          }
          const bool join_like_00 = (center > 0) == (v00 > 0);
          if ((code == 5) == join_like_00) {
            add_seg(left, bottom);
            add_seg(right, top);
          } else {
            add_seg(left, top);
            add_seg(bottom, right);
          }
          break;
        }
        default: break;
      }
    }

  // walk chains
  std::vector<char> used(segs.size(), 0);
  std::vector<LevelCurve> out;

  auto degree = [&](const EdgeId& e) {
    int d = 0;
    for (auto [it, end] = adj.equal_range(e); it != end; ++it)
      if (!used[it->second.second]) ++d;
    return d;
  };

  auto walk = [&](EdgeId start) {
    std::vector<EdgeId> chain{start};
    EdgeId cur = start;
    while (true) {
      bool advanced = false;
      for (auto [it, end] = adj.equal_range(cur); it != end; ++it) {
        if (used[it->second.second]) continue;
        used[it->second.second] = 1;
        cur = it->second.first;
        chain.push_back(cur);
        advanced = true;
        break;
      }
      if (!advanced) break;
    }
    return chain;
  };

  auto emit = [&](const std::vector<EdgeId>& chain) {
    if (chain.size() < 2) return;
    LevelCurve curve;
    curve.level = c;
    curve.kind = kind;
    curve.closed = !(chain.front() < chain.back()) && !(chain.back() < chain.front());
    const size_t n = chain.size() - (curve.closed ? 1 : 0);
    for (size_t k = 0; k < n; ++k) {
      Vec2 p = edge_crossing(g, chain[k]);
      // on-curve Newton correction
      for (int it = 0; it < 3; ++it) {
        double val;
        Vec2 grad;
        try {
          val = u.value(p) - c;
          grad = u.gradient(p);
        } catch (const Error&) {
          break;
        }
        const double g2 = grad.norm2();
        if (g2 < 1e-300) break;
        const Vec2 step = grad * (val / g2);
        if (step.norm() > g.cell) break;
        p = p - step;
      }
      curve.vertices.push_back(p);
    }
    if (curve.closed) {
      if (polygon_signed_area(curve.vertices) < 0)
        std::reverse(curve.vertices.begin(), curve.vertices.end());
      curve.vertices.push_back(curve.vertices.front());
    }
    out.push_back(std::move(curve));
  };

  // open chains first (deterministic map order), then loops
  for (const auto& [edge, link] : adj) {
    if (used[link.second]) continue;
    if (degree(edge) == 1) emit(walk(edge));
  }
  for (const auto& [edge, link] : adj) {
    if (used[link.second]) continue;
    emit(walk(edge));
  }
  return out;
}

double curvature_at(const ScalarField& u, Vec2 p) {
  const Vec2 g = u.gradient(p);
  const double gn = g.norm();
  if (gn < 1e-12)
    fail("gradient-too-small", "curvature undefined where the gradient vanishes");
  const auto h = u.hessian(p);
  return -(h[0] * g.y * g.y - 2.0 * h[1] * g.x * g.y + h[2] * g.x * g.x) / (gn * gn * gn);
}

std::pair<Vec2, double> min_curvature_on_curve(const ScalarField& u, const LevelCurve& curve) {
  const auto& v = curve.vertices;
  if (v.size() < 2) fail("gradient-too-small", "curve has no vertices");
  const size_t n = v.size() - (curve.closed ? 1 : 0);
  size_t best = 0;
  double kmin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < n; ++k) {
    const double kk = curvature_at(u, v[k]);
    if (kk < kmin) {
      kmin = kk;
      best = k;
    }
  }
  // golden-section refinement over the two adjacent segments, with the chord
  // points projected back onto the level set before curvature is evaluated
  auto at_param = [&](double t) {  // t in [-1, 1] around the minimizer
    const size_t i = best;
    Vec2 p;
    if (t >= 0) {
      const size_t j = curve.closed ? (i + 1) % n : std::min(i + 1, n - 1);
      p = v[i] + (v[j] - v[i]) * t;
    } else {
      const size_t j = curve.closed ? (i + n - 1) % n : (i == 0 ? 0 : i - 1);
      p = v[i] + (v[j] - v[i]) * (-t);
    }
    for (int it = 0; it < 3; ++it) {
      try {
        const double val = u.value(p) - curve.level;
        const Vec2 g = u.gradient(p);
        const double g2 = g.norm2();
        if (g2 < 1e-300) break;
        p = p - g * (val / g2);
      } catch (const Error&) {
        break;
      }
    }
    return p;
  };
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double lo = -1, hi = 1;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  auto safe_curv = [&](double t) {
    try {
      return curvature_at(u, at_param(t));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double f1 = safe_curv(x1), f2 = safe_curv(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = safe_curv(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = safe_curv(x2);
    }
  }
  const double tbest = f1 < f2 ? x1 : x2;
  const double kbest = std::min(f1, f2);
  if (kbest < kmin) return {at_param(tbest), kbest};
  return {v[best], kmin};
}

namespace {

/// ScalarField view of a plain callable (used to trace mask boundaries).
class FunctionField final : public ScalarField {
public:
  FunctionField(std::function<double(Vec2)> f, FieldDomain dom)
      : f_(std::move(f)), dom_(std::move(dom)) {}
  double value(Vec2 p) const override { return f_(p); }
  Vec2 gradient(Vec2 p) const override {
    const double h = 1e-6 * std::max(1.0, dom_.diameter());
    return {(f_({p.x + h, p.y}) - f_({p.x - h, p.y})) / (2 * h),
            (f_({p.x, p.y + h}) - f_({p.x, p.y - h})) / (2 * h)};
  }
  std::array<double, 3> hessian(Vec2) const override {
    fail("gradient-too-small", "no second derivatives for function fields");
  }
  const FieldDomain& domain() const override { return dom_; }
  std::string describe() const override { return "mask"; }

private:
  std::function<double(Vec2)> f_;
  FieldDomain dom_;
};

std::vector<Vec2> domain_boundary_polyline(const FieldDomain& dom, double cell) {
  if (!dom.level) {
    // the box itself
    std::vector<Vec2> loop;
    const Bounds& b = dom.box;
    const int mx = std::max(2, int(b.width() / cell)), my = std::max(2, int(b.height() / cell));
    for (int i = 0; i < mx; ++i) loop.push_back({b.x0 + b.width() * i / mx, b.y0});
    for (int j = 0; j < my; ++j) loop.push_back({b.x1, b.y0 + b.height() * j / my});
    for (int i = mx; i > 0; --i) loop.push_back({b.x0 + b.width() * i / mx, b.y1});
    for (int j = my; j > 0; --j) loop.push_back({b.x0, b.y0 + b.height() * j / my});
    loop.push_back(loop.front());
    return loop;
  }
  FieldDomain boxonly;
  boxonly.box = dom.box;
  FunctionField phi(dom.level, boxonly);
  auto curves = extract_level(phi, 0.0, boxonly, cell, CurveKind::level_of_u);
  // keep the longest closed component
  const LevelCurve* best = nullptr;
  for (const auto& c : curves)
    if (c.closed && (!best || c.vertices.size() > best->vertices.size())) best = &c;
  if (!best) fail("level-set-not-closed", "domain boundary does not close inside the box");
  return best->vertices;
}

}  // namespace

NodalSetReport directional_nodal_set(const ScalarField& u, double theta, const FieldDomain& dom,
                                     double cell) {
  NodalSetReport rep;
  std::shared_ptr<const ScalarField> alias(std::shared_ptr<void>(), &u);
  DirectionalDerivativeField v(alias, theta);

  // boundary polyline, sampled slightly inside so grid-backed fields stay evaluable
  std::vector<Vec2> boundary = domain_boundary_polyline(dom, cell);
  const double inset = 2.0 * cell;
  std::vector<Vec2> inner;
  inner.reserve(boundary.size());
  {
    const size_t n = boundary.size() - 1;
    for (size_t k = 0; k < n; ++k) {
      const Vec2 prev = boundary[(k + n - 1) % n], next = boundary[(k + 1) % n];
      Vec2 tang = next - prev;
      const double tn = tang.norm();
      if (tn < 1e-300) continue;
      // boundary loops are CCW, so the inward normal is the left normal
      Vec2 nrm{-tang.y / tn, tang.x / tn};
      inner.push_back(boundary[k] + nrm * inset);
    }
  }

  double min_grad = std::numeric_limits<double>::infinity();
  std::vector<double> vals;
  std::vector<Vec2> pts;
  for (const Vec2& p : inner) {
    try {
      min_grad = std::min(min_grad, u.gradient(p).norm());
      vals.push_back(v.value(p));
      pts.push_back(p);
    } catch (const Error&) {
    }
  }
  if (pts.size() < 8) fail("boundary-gradient-vanishes", "cannot sample the domain boundary");
  rep.min_boundary_gradient = min_grad;
  double uscale = 0;
  for (const Vec2& p : pts) uscale = std::max(uscale, std::abs(u.value(p)));
  if (min_grad <= 1e-6 * std::max(uscale, 1e-30) / std::max(cell, 1e-30))
    fail("boundary-gradient-vanishes", "gradient vanishes on the domain boundary");

  // sign changes of u_theta along the boundary -> bisection
  const size_t n = pts.size();
  for (size_t k = 0; k < n; ++k) {
    const double a = vals[k], b = vals[(k + 1) % n];
    if (a == 0.0 || (a > 0) == (b > 0)) continue;
    Vec2 lo = pts[k], hi = pts[(k + 1) % n];
    double va = a;
    for (int it = 0; it < 60; ++it) {
      const Vec2 mid = (lo + hi) * 0.5;
      const double vm = v.value(mid);
      if ((vm > 0) == (va > 0)) {
        lo = mid;
        va = vm;
      } else {
        hi = mid;
      }
    }
    rep.boundary_points.push_back((lo + hi) * 0.5);
  }

  rep.components = extract_level(v, 0.0, dom, cell,
                                 theta == 0.0 ? CurveKind::nodal_of_u_x : CurveKind::nodal_of_u_theta);
  for (const auto& comp : rep.components) {
    if (!comp.closed) continue;
    bool interior = true;
    for (const Vec2& p : comp.vertices)
      if (dom.distance_to_boundary(p) <= cell) {
        interior = false;
        break;
      }
    if (interior) rep.has_closed_interior_component = true;
  }
  return rep;
}

int nodal_branch_count(const ScalarField& v, Vec2 p, double radius) {
  double r = radius;
  if (r <= 0) r = std::min(0.02 * v.domain().diameter(), 0.5 * v.domain().distance_to_boundary(p));
  if (r <= 0) fail("no-sign-structure", "no room for a sampling circle");
  const int m = 720;
  std::vector<double> s(m);
  double scale = 0;
  for (int k = 0; k < m; ++k) {
    const double t = 2 * M_PI * k / m;
    s[size_t(k)] = v.value({p.x + r * std::cos(t), p.y + r * std::sin(t)});
    scale = std::max(scale, std::abs(s[size_t(k)]));
  }
  if (scale == 0) fail("no-sign-structure", "field vanishes identically on the circle");
  const double tol = 1e-9 * scale;
  int changes = 0;
  int prev_sign = 0;
  int first_sign = 0;
  for (int k = 0; k < m; ++k) {
    if (std::abs(s[size_t(k)]) <= tol) continue;
    const int sign = s[size_t(k)] > 0 ? 1 : -1;
    if (prev_sign != 0 && sign != prev_sign) ++changes;
    if (prev_sign == 0) first_sign = sign;
    prev_sign = sign;
  }
  if (prev_sign != 0 && first_sign != 0 && prev_sign != first_sign) ++changes;  // wrap
  if (changes == 0) fail("no-sign-structure", "field is one-signed on the circle");
  return changes / 2;
}

double polygon_signed_area(std::span<const Vec2> loop) {
  double a = 0;
  const size_t n = loop.size();
  for (size_t k = 0; k + 1 < n; ++k) a += loop[k].x * loop[k + 1].y - loop[k + 1].x * loop[k].y;
  if (n >= 2 && (loop.front().x != loop.back().x || loop.front().y != loop.back().y))
    a += loop[n - 1].x * loop[0].y - loop[0].x * loop[n - 1].y;
  return 0.5 * a;
}

bool point_in_polygon(std::span<const Vec2> loop, Vec2 p) {
  bool inside = false;
  const size_t n = loop.size();
  for (size_t k = 0, j = n - 1; k < n; j = k++) {
    const Vec2 a = loop[k], b = loop[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      inside = !inside;
  }
  return inside;
}

void write_curve_csv(const std::string& path, const ScalarField& u, const LevelCurve& curve) {
  std::ofstream os(path);
  if (!os) fail("parse-error", "cannot open for writing: " + path);
  os << "level,x,y,k\n";
  for (const Vec2& p : curve.vertices) {
    double k;
    try {
      k = curvature_at(u, p);
    } catch (const Error&) {
      k = std::numeric_limits<double>::quiet_NaN();
    }
    os << format17(curve.level) << ',' << format17(p.x) << ',' << format17(p.y) << ','
       << format17(k) << '\n';
  }
}

}  // namespace morse2d
