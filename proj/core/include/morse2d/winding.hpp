#pragma once

#include <vector>

#include "morse2d/point.hpp"
#include "morse2d/scalar_field.hpp"

namespace morse2d {

/// Winding number of grad u on a circle: the topological index of the
/// enclosed zero. Certified when every consecutive angular increment stays
/// strictly below pi/2, which guarantees correct unwrapping.
struct IndexResult {
  int value = 0;
  double radius = 0;
  int samples = 0;
  double min_gradient_norm = 0;
  bool certified = false;
};

/// Winding number over m equispaced samples, doubling m until certified or
/// the cap is reached. Errors: gradient-vanishes-on-circle, not-certified.
IndexResult gradient_index(const ScalarField& u, Vec2 p, double r, int m,
                           int sample_cap = 1 << 14);

/// Geometric radius ladder r_max / 2^k; returns the smallest certified
/// radius whose neighboring ladder radii agree. Error: non-isolated-suspected.
IndexResult robust_index(const ScalarField& u, Vec2 p);

/// Winding number of grad u along a closed polyline (first vertex need not
/// be repeated). Error: gradient-vanishes-on-curve.
int boundary_degree(const ScalarField& u, const std::vector<Vec2>& loop);

}  // namespace morse2d
