#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "morse2d/point.hpp"
#include "morse2d/scalar_field.hpp"

namespace morse2d {

enum class CurveKind { level_of_u, nodal_of_u_theta, nodal_of_u_x };

/// Traced polyline of a level or nodal set. Closed curves repeat the first
/// vertex at the end and are oriented counterclockwise.
struct LevelCurve {
  double level = 0;
  std::vector<Vec2> vertices;
  bool closed = false;
  CurveKind kind = CurveKind::level_of_u;
};

/// Marching-squares tracing of {u = c} over dom at the given cell size, one
/// curve per connected component, with per-vertex Newton correction.
/// Error level-out-of-range (level_of_u kind only).
std::vector<LevelCurve> extract_level(const ScalarField& u, double c, const FieldDomain& dom,
                                      double cell, CurveKind kind = CurveKind::level_of_u);

/// k = -(uxx uy^2 - 2 uxy ux uy + uyy ux^2) / |grad u|^3.
/// Error gradient-too-small.
double curvature_at(const ScalarField& u, Vec2 p);

/// Minimum of curvature_at over the curve, golden-section refined around the
/// discrete minimizer.
std::pair<Vec2, double> min_curvature_on_curve(const ScalarField& u, const LevelCurve& curve);

struct NodalSetReport {
  std::vector<LevelCurve> components;
  std::vector<Vec2> boundary_points;  // where the nodal set meets the domain boundary
  bool has_closed_interior_component = false;
  double min_boundary_gradient = 0;
};

/// Traces {u_theta = 0} with u_theta = cos(theta) u_x + sin(theta) u_y.
/// Checks grad u != 0 on the domain boundary by sampling (error
/// boundary-gradient-vanishes) and locates boundary crossings by bisection.
NodalSetReport directional_nodal_set(const ScalarField& u, double theta, const FieldDomain& dom,
                                     double cell);

/// Number of nodal branches of v through p: sign changes of v on a small
/// circle divided by 2. Error no-sign-structure.
int nodal_branch_count(const ScalarField& v, Vec2 p, double radius = 0.0);

double polygon_signed_area(std::span<const Vec2> loop);
bool point_in_polygon(std::span<const Vec2> loop, Vec2 p);

/// CSV with columns level,x,y,k (one file per curve).
void write_curve_csv(const std::string& path, const ScalarField& u, const LevelCurve& curve);

}  // namespace morse2d
