#include "morse2d/grid.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

// 1D cubic Lagrange weights on nodes {-1,0,1,2} at parameter t in [0,1],
// plus first and second derivative weights (per unit step).
void lagrange_weights(double t, double* w, double* dw, double* ddw) {
  w[0] = -t * (t - 1) * (t - 2) / 6.0;
  w[1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
  w[2] = -t * (t + 1) * (t - 2) / 2.0;
  w[3] = t * (t + 1) * (t - 1) / 6.0;
  if (dw) {
    dw[0] = -(3 * t * t - 6 * t + 2) / 6.0;
    dw[1] = (3 * t * t - 4 * t - 1) / 2.0;
    dw[2] = -(3 * t * t - 2 * t - 2) / 2.0;
    dw[3] = (3 * t * t - 1) / 6.0;
  }
  if (ddw) {
    ddw[0] = -(6 * t - 6) / 6.0;
    ddw[1] = (6 * t - 4) / 2.0;
    ddw[2] = -(6 * t - 2) / 2.0;
    ddw[3] = (6 * t) / 6.0;
  }
}

}  // namespace

GridField::GridField(int nx, int ny, Vec2 origin, double hx, double hy)
    : nx_(nx),
      ny_(ny),
      origin_(origin),
      hx_(hx),
      hy_(hy),
      values_(size_t(nx) * ny, std::numeric_limits<double>::quiet_NaN()),
      kinds_(size_t(nx) * ny, NodeKind::exterior) {
  if (nx < 2 || ny < 2 || hx <= 0 || hy <= 0) fail("parse-error", "degenerate grid");
}

std::vector<std::pair<int, int>> GridField::interior_nodes() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (kind(i, j) == NodeKind::interior) out.emplace_back(i, j);
  return out;
}

int GridField::count(NodeKind k) const {
  int c = 0;
  for (auto v : kinds_)
    if (v == k) ++c;
  return c;
}

bool GridField::block16(Vec2 p, int& i0, int& j0) const {
  const double fx = (p.x - origin_.x) / hx_;
  const double fy = (p.y - origin_.y) / hy_;
  if (fx < -1e-12 || fy < -1e-12 || fx > nx_ - 1 + 1e-12 || fy > ny_ - 1 + 1e-12) return false;
  const int ci = std::clamp(int(std::floor(fx)), 0, nx_ - 2);
  const int cj = std::clamp(int(std::floor(fy)), 0, ny_ - 2);
  // prefer the centered 4x4 block, then shifted blocks
  const int base_i = std::clamp(ci - 1, 0, std::max(0, nx_ - 4));
  const int base_j = std::clamp(cj - 1, 0, std::max(0, ny_ - 4));
  auto all_usable = [&](int bi, int bj) {
    if (bi < 0 || bj < 0 || bi + 3 >= nx_ || bj + 3 >= ny_) return false;
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i)
        if (!usable(bi + i, bj + j)) return false;
    return true;
  };
  static constexpr int kShift[3] = {0, -1, 1};
  for (int sj : kShift)
    for (int si : kShift) {
      const int bi = base_i + si, bj = base_j + sj;
      // the block must still bracket the evaluation cell
      if (bi > ci || bi + 3 < ci + 1 || bj > cj || bj + 3 < cj + 1) continue;
      if (all_usable(bi, bj)) {
        i0 = bi;
        j0 = bj;
        return true;
      }
    }
  return false;
}

bool GridField::evaluable(Vec2 p) const {
  int i0, j0;
  return block16(p, i0, j0);
}

double GridField::eval(Vec2 p) const {
  int i0, j0;
  if (!block16(p, i0, j0)) {
    // bilinear fallback on a fully usable cell
    const double fx = (p.x - origin_.x) / hx_, fy = (p.y - origin_.y) / hy_;
    const int ci = std::clamp(int(std::floor(fx)), 0, nx_ - 2);
    const int cj = std::clamp(int(std::floor(fy)), 0, ny_ - 2);
    if (fx >= -1e-12 && fy >= -1e-12 && fx <= nx_ - 1 + 1e-12 && fy <= ny_ - 1 + 1e-12 &&
        usable(ci, cj) && usable(ci + 1, cj) && usable(ci, cj + 1) && usable(ci + 1, cj + 1)) {
      const double tx = fx - ci, ty = fy - cj;
      return (1 - tx) * (1 - ty) * value(ci, cj) + tx * (1 - ty) * value(ci + 1, cj) +
             (1 - tx) * ty * value(ci, cj + 1) + tx * ty * value(ci + 1, cj + 1);
    }
    fail("point-outside-domain", "grid evaluation outside the masked domain");
  }
  const double tx = (p.x - origin_.x) / hx_ - (i0 + 1);
  const double ty = (p.y - origin_.y) / hy_ - (j0 + 1);
  double wx[4], wy[4];
  lagrange_weights(tx, wx, nullptr, nullptr);
  lagrange_weights(ty, wy, nullptr, nullptr);
  double s = 0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) s += wx[i] * wy[j] * value(i0 + i, j0 + j);
  return s;
}

Vec2 GridField::gradient(Vec2 p) const {
  int i0, j0;
  if (!block16(p, i0, j0)) fail("point-outside-domain", "grid gradient outside the masked domain");
  const double tx = (p.x - origin_.x) / hx_ - (i0 + 1);
  const double ty = (p.y - origin_.y) / hy_ - (j0 + 1);
  double wx[4], wy[4], dwx[4], dwy[4];
  lagrange_weights(tx, wx, dwx, nullptr);
  lagrange_weights(ty, wy, dwy, nullptr);
  double gx = 0, gy = 0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      const double v = value(i0 + i, j0 + j);
      gx += dwx[i] * wy[j] * v;
      gy += wx[i] * dwy[j] * v;
    }
  return {gx / hx_, gy / hy_};
}

std::array<double, 3> GridField::hessian(Vec2 p) const {
  int i0, j0;
  if (!block16(p, i0, j0)) fail("point-outside-domain", "grid hessian outside the masked domain");
  const double tx = (p.x - origin_.x) / hx_ - (i0 + 1);
  const double ty = (p.y - origin_.y) / hy_ - (j0 + 1);
  double wx[4], wy[4], dwx[4], dwy[4], ddwx[4], ddwy[4];
  lagrange_weights(tx, wx, dwx, ddwx);
  lagrange_weights(ty, wy, dwy, ddwy);
  double xx = 0, xy = 0, yy = 0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      const double v = value(i0 + i, j0 + j);
      xx += ddwx[i] * wy[j] * v;
      xy += dwx[i] * dwy[j] * v;
      yy += wx[i] * ddwy[j] * v;
    }
  return {xx / (hx_ * hx_), xy / (hx_ * hy_), yy / (hy_ * hy_)};
}

void GridField::classify_from_values() {
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) kind(i, j) = std::isnan(value(i, j)) ? NodeKind::exterior : NodeKind::interior;
  // nodes on the array edge or adjacent to an exterior node carry boundary data
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (kind(i, j) == NodeKind::exterior) continue;
      const bool edge = i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
      auto ext = [&](int a, int b) { return kind(a, b) == NodeKind::exterior; };
      if (edge || ext(i - 1, j) || ext(i + 1, j) || ext(i, j - 1) || ext(i, j + 1))
        kind(i, j) = NodeKind::boundary;
    }
}

GridField build_masked_grid(const std::function<double(Vec2)>& phi, Bounds box, double h,
                            std::optional<Vec2> seed, double boundary_value) {
  const int nx = int(std::floor(box.width() / h)) + 1;
  const int ny = int(std::floor(box.height() / h)) + 1;
  if (nx < 4 || ny < 4) fail("domain-empty", "mask grid too coarse for the bounding box");
  GridField g(nx, ny, {box.x0, box.y0}, h, h);

  std::vector<char> neg(size_t(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) neg[size_t(j) * nx + i] = phi(g.node(i, j)) < 0.0 ? 1 : 0;

  // seed node: requested point, else minimum of phi
  int si = -1, sj = -1;
  if (seed) {
    si = std::clamp(int(std::lround((seed->x - box.x0) / h)), 0, nx - 1);
    sj = std::clamp(int(std::lround((seed->y - box.y0) / h)), 0, ny - 1);
    if (!neg[size_t(sj) * nx + si]) fail("domain-empty", "seed point is not in the interior");
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double v = phi(g.node(i, j));
        if (v < best) {
          best = v;
          si = i;
          sj = j;
        }
      }
    if (si < 0 || !neg[size_t(sj) * nx + si]) fail("domain-empty", "level function has no interior node");
  }

  // flood fill the connected negative component of the seed
  std::vector<char> comp(size_t(nx) * ny, 0);
  std::deque<std::pair<int, int>> q{{si, sj}};
  comp[size_t(sj) * nx + si] = 1;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
      const size_t id = size_t(b) * nx + a;
      if (neg[id] && !comp[id]) {
        comp[id] = 1;
        q.emplace_back(a, b);
      }
    }
  }

  // interior = component nodes not on the array edge; arms from bisection
  std::vector<CutArms> arms(size_t(nx) * ny);
  auto bisect_arm = [&](Vec2 from, Vec2 dir) {
    double lo = 0.0, hi = 1.0;  // phi(from) < 0 <= phi(from + h*dir)
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (phi(from + dir * (mid * h)) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return std::max(0.5 * (lo + hi), 1e-6);
  };

  int interior_count = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const size_t id = size_t(j) * nx + i;
      if (!comp[id]) continue;
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
        fail("level-set-not-closed", "domain component reaches the bounding box; it is not enclosed");
      g.kind(i, j) = NodeKind::interior;
      ++interior_count;
      CutArms& a = arms[id];
      const Vec2 p = g.node(i, j);
      if (!comp[id - 1]) a.w = bisect_arm(p, {-1, 0});
      if (!comp[id + 1]) a.e = bisect_arm(p, {1, 0});
      if (!comp[id - nx]) a.s = bisect_arm(p, {0, -1});
      if (!comp[id + nx]) a.n = bisect_arm(p, {0, 1});
    }
  if (interior_count == 0) fail("domain-empty", "empty interior");

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (g.kind(i, j) == NodeKind::interior) {
        g.value(i, j) = 0.0;
        continue;
      }
      auto is_int = [&](int a, int b) {
        return a >= 0 && b >= 0 && a < nx && b < ny && g.kind(a, b) == NodeKind::interior;
      };
      if (is_int(i - 1, j) || is_int(i + 1, j) || is_int(i, j - 1) || is_int(i, j + 1) ||
          is_int(i - 1, j - 1) || is_int(i + 1, j - 1) || is_int(i - 1, j + 1) || is_int(i + 1, j + 1)) {
        g.kind(i, j) = NodeKind::boundary;
        g.value(i, j) = boundary_value;
      }
    }
  g.set_cut_arms(std::move(arms));
  return g;
}

GridField build_rect_grid(Bounds box, double h, double boundary_value) {
  const int nx = int(std::lround(box.width() / h)) + 1;
  const int ny = int(std::lround(box.height() / h)) + 1;
  if (nx < 3 || ny < 3) fail("domain-empty", "rectangle too coarse for spacing h");
  GridField g(nx, ny, {box.x0, box.y0}, box.width() / (nx - 1), box.height() / (ny - 1));
  std::vector<CutArms> arms(size_t(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const bool edge = i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
      g.kind(i, j) = edge ? NodeKind::boundary : NodeKind::interior;
      g.value(i, j) = edge ? boundary_value : 0.0;
    }
  g.set_cut_arms(std::move(arms));
  return g;
}

}  // namespace morse2d
