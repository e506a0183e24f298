#pragma once

#include <algorithm>
#include <cmath>

namespace morse2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {k * x, k * y}; }
  Vec2 operator/(double k) const { return {x / k, y / k}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double k, Vec2 v) { return v * k; }

/// Axis-aligned box [x0,x1] x [y0,y1].
struct Bounds {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  Bounds() = default;
  Bounds(double ax0, double ay0, double ax1, double ay1) : x0(ax0), y0(ay0), x1(ax1), y1(ay1) {}

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diameter() const { return std::hypot(width(), height()); }
  Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  double border_distance(Vec2 p) const {
    return std::min(std::min(p.x - x0, x1 - p.x), std::min(p.y - y0, y1 - p.y));
  }
};

}  // namespace morse2d
