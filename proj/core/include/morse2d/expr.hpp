#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "morse2d/point.hpp"
#include "morse2d/profile.hpp"
#include "morse2d/series.hpp"

namespace morse2d {

/// Closed-form 2D field: an expression tree over constants, coordinates,
/// sums, products, scalar multiples, integer powers, and univariate profiles
/// applied either to the distance to a center or to a single coordinate.
/// Values and all mixed partials up to order 6 are evaluated analytically
/// (profiles carry derivative rules; differentiation is forward Taylor mode).
class FieldExpr {
public:
  FieldExpr() = default;

  static FieldExpr constant(double c);
  static FieldExpr coordinate(int axis);  // 0 -> x, 1 -> y
  static FieldExpr sum(std::vector<FieldExpr> children);
  static FieldExpr product(std::vector<FieldExpr> children);
  static FieldExpr scale(double k, FieldExpr e);
  static FieldExpr pow(FieldExpr e, int k);  // k >= 0
  /// profile(r) with r = distance from (cx, cy).
  static FieldExpr radial(Profile p, double cx, double cy);
  /// profile(coordinate - shift).
  static FieldExpr along_coordinate(Profile p, int axis, double shift = 0.0);

  bool empty() const { return !node_; }
  double value(Vec2 p) const;
  /// Taylor expansion about p up to `order` (<= 6).
  Series2 taylor(Vec2 p, int order) const;
  Vec2 gradient(Vec2 p) const;

  std::string to_prefix() const;
  static FieldExpr parse_prefix(std::string_view text);  // parse-error

private:
  struct Node;
  explicit FieldExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace morse2d
