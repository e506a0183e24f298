#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morse2d/jets.hpp"
#include "morse2d/nonlinearity.hpp"
#include "morse2d/scalar_field.hpp"
#include "morse2d/winding.hpp"

namespace morse2d {

enum class Isolation { isolated, cluster, curve_suspected };
std::string to_string(Isolation iso);

struct CriticalPoint {
  Vec2 location;
  double gradient_norm = 0;
  Isolation isolation = Isolation::isolated;
};

/// Newton (Levenberg-damped) zeros of grad u seeded at discrete minima of
/// |grad u| on a lattice, deduplicated at half the seed spacing. Points are
/// tagged curve-suspected when >= 5 nearby zeros fit a line.
std::vector<CriticalPoint> find_critical_points(const ScalarField& u, const FieldDomain& dom,
                                                double seed_spacing);

enum class PointClass {
  nondegenerate_max,
  nondegenerate_min,
  nondegenerate_saddle,
  degenerate_max,
  degenerate_min,
  degenerate_saddle,
  non_isolated_extremum,
  unclassified
};
std::string to_string(PointClass c);

struct CriticalPointReport {
  CriticalPoint point;
  std::array<double, 2> hessian_eigenvalues{0, 0};
  PointClass cls = PointClass::unclassified;
  double rotation_angle = 0;
  double u_yy = 0;
  std::optional<int> n;
  std::optional<bool> n_odd;
  std::optional<double> alpha, beta;
  std::optional<int> l;
  std::optional<double> pure_x_coeff_at_l;
  std::optional<IndexResult> index;
  std::optional<double> inequality_1_8_slack;
  std::optional<double> equality_1_8_gap;
  std::vector<double> chain_residuals;
  std::optional<double> expansion_residual_slope;
  bool expansion_exact = false;
  std::vector<std::string> theorem_violations;
  bool solution_verified = false;
  std::optional<TaylorJet> jet;  // rotated (normal-form) jet
  double value_at_point = 0;
};

struct ClassifySettings {
  int jet_order = 6;
  double solution_gate_rel = 1e-6;
  bool with_expansion_slope = true;
  bool with_index = true;
};

/// Jet -> normal form -> nondegenerate shortcut or the degenerate branch
/// (n, parity, alpha, beta, max/min/saddle by circle sampling, index, l,
/// the order-n coefficient chain, and the l = 2n-2 inequality). Sign-law
/// failures are recorded in theorem_violations, never dropped.
CriticalPointReport classify_point(const ScalarField& u, const CriticalPoint& p,
                                   const Nonlinearity* f = nullptr,
                                   const ClassifySettings& settings = {});

struct SlopeFit {
  double slope = 0;
  bool exact = false;
  std::vector<double> radii, residuals;
};

/// Max |u - M| on circles of the given radii in the normal-form frame, and
/// the log-log slope. M is the classified expansion model; in the odd
/// extremum case with l present the pure-y part is subtracted exactly and the
/// l-term enters as Re(z^l).
SlopeFit expansion_residual_slope(const ScalarField& u, const CriticalPointReport& rpt,
                                  std::span<const double> radii);

}  // namespace morse2d
