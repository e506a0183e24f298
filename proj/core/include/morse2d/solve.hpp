#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morse2d/expr.hpp"
#include "morse2d/grid.hpp"
#include "morse2d/nonlinearity.hpp"
#include "morse2d/scalar_field.hpp"

namespace morse2d {

/// Discretization domain: an axis-aligned rectangle, or the sublevel set
/// {level < 0} of an expression inside a bounding box.
struct DomainSpec {
  enum class Kind { rect, level };
  Kind kind = Kind::rect;
  Bounds box{0, 0, 1, 1};
  FieldExpr level;             // kind == level
  std::optional<Vec2> seed;    // component selector for masked domains
};

struct SolveConfig {
  DomainSpec domain;
  double h = 1.0 / 64;
  Nonlinearity f = Nonlinearity::constant(1.0);
  double boundary_value = 0.0;
  double newton_tol = 1e-10;  // residual max-norm
  int max_iterations = 50;
  double damping = 1.0;  // in (0,1]

  void validate() const;
};

/// Key = value text: domain (rect x0 y0 x1 y1 | level <prefix expr>),
/// bbox (for level), h, f, bc, tol, max_iter, damping, seed.
SolveConfig parse_solve_config(std::istream& is);
SolveConfig parse_solve_config_file(const std::string& path);

struct SolveResult {
  GridField field;
  int newton_iterations = 0;
  double residual_maxnorm = 0;
};

/// Damped Newton for -Lap u = f(u), u = boundary_value on the boundary,
/// on the 5-point Shortley-Weller discretization.
SolveResult solve_dirichlet(const SolveConfig& cfg, const ScalarField* initial = nullptr);

struct OrderFit {
  double order = 0;
  bool exact = false;  // all errors at rounding level; order test skipped
  std::vector<double> hs, errors;
};

/// Least-squares slope of log(max interior-node error) against log h.
OrderFit convergence_order(const SolveConfig& cfg, const ScalarField& reference,
                           std::span<const double> h_list);

}  // namespace morse2d
