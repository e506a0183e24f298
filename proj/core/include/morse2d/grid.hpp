#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "morse2d/point.hpp"

namespace morse2d {

enum class NodeKind : std::uint8_t { interior, boundary, exterior };

/// Fractional arm lengths (in cell units, in (0,1]) from an interior node
/// toward its four neighbors; < 1 where the domain boundary cuts the edge.
struct CutArms {
  double w = 1, e = 1, s = 1, n = 1;
};

/// Regular 2D grid of samples with a node mask. Exterior nodes hold NaN and
/// are never read. Evaluation between nodes is tensor-product cubic Lagrange
/// interpolation (exactly reproduces polynomials of total degree <= 3).
class GridField {
public:
  GridField() = default;
  GridField(int nx, int ny, Vec2 origin, double hx, double hy);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Vec2 origin() const { return origin_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  Bounds bbox() const { return {origin_.x, origin_.y, origin_.x + hx_ * (nx_ - 1), origin_.y + hy_ * (ny_ - 1)}; }

  Vec2 node(int i, int j) const { return {origin_.x + hx_ * i, origin_.y + hy_ * j}; }
  double value(int i, int j) const { return values_[size_t(j) * nx_ + i]; }
  double& value(int i, int j) { return values_[size_t(j) * nx_ + i]; }
  NodeKind kind(int i, int j) const { return kinds_[size_t(j) * nx_ + i]; }
  NodeKind& kind(int i, int j) { return kinds_[size_t(j) * nx_ + i]; }
  bool usable(int i, int j) const { return kind(i, j) != NodeKind::exterior; }

  /// Bicubic interpolation; error point-outside-domain if no valid stencil.
  double eval(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  std::array<double, 3> hessian(Vec2 p) const;  // uxx, uxy, uyy
  bool evaluable(Vec2 p) const;

  /// Interior nodes in deterministic (j-major) order.
  std::vector<std::pair<int, int>> interior_nodes() const;
  int count(NodeKind k) const;

  /// Cut-cell geometry (present on solver outputs; lost over file round trips).
  const std::vector<CutArms>* cut_arms() const { return arms_ ? &*arms_ : nullptr; }
  void set_cut_arms(std::vector<CutArms> arms) { arms_ = std::move(arms); }
  const CutArms& arm(int i, int j) const { return (*arms_)[size_t(j) * nx_ + i]; }

  /// Re-derive the mask from values (nan => exterior) after reading a file.
  void classify_from_values();

private:
  bool block16(Vec2 p, int& i0, int& j0) const;

  int nx_ = 0, ny_ = 0;
  Vec2 origin_{};
  double hx_ = 1, hy_ = 1;
  std::vector<double> values_;
  std::vector<NodeKind> kinds_;
  std::optional<std::vector<CutArms>> arms_;
};

/// Builds a masked grid over `box` with spacing h from a level function
/// (inside where phi < 0). Keeps only the connected interior component
/// containing `seed` (or the node of minimum phi when seed is absent).
/// Interior nodes get CutArms from bisection on phi along cut edges;
/// non-interior nodes adjacent to the interior become boundary nodes carrying
/// `boundary_value`; the rest are exterior NaN.
GridField build_masked_grid(const std::function<double(Vec2)>& phi, Bounds box, double h,
                            std::optional<Vec2> seed, double boundary_value);

/// Rectangle [box] discretized so the outermost node ring is the boundary.
GridField build_rect_grid(Bounds box, double h, double boundary_value);

}  // namespace morse2d
