#include "morse2d/replicate.hpp"

#include <algorithm>
#include <cmath>

#include "morse2d/errors.hpp"
#include "morse2d/levelset.hpp"
#include "morse2d/profile.hpp"
#include "morse2d/solve.hpp"
#include "morse2d/spectrum.hpp"

namespace morse2d {

namespace {

double splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return double(z % 1000003) / 1000003.0;
}

FieldExpr poly_to_expr(const Poly2& p) {
  std::vector<FieldExpr> terms;
  for (const auto& [k, c] : p.terms()) {
    std::vector<FieldExpr> factors;
    if (k.first) factors.push_back(FieldExpr::pow(FieldExpr::coordinate(0), k.first));
    if (k.second) factors.push_back(FieldExpr::pow(FieldExpr::coordinate(1), k.second));
    FieldExpr mono = factors.empty() ? FieldExpr::constant(1.0)
                                     : (factors.size() == 1 ? factors[0]
                                                            : FieldExpr::product(std::move(factors)));
    terms.push_back(FieldExpr::scale(to_double(c), std::move(mono)));
  }
  if (terms.empty()) return FieldExpr::constant(0.0);
  return terms.size() == 1 ? terms[0] : FieldExpr::sum(std::move(terms));
}

/// Validates that {u > 0} closes around `seed` inside `scan`, and returns the
/// domain (tight box + sublevel mask). Throws level-set-not-closed.
FieldDomain validated_positive_component(const Poly2& u, Bounds scan, double cell, Vec2 seed) {
  FieldDomain boxonly;
  boxonly.box = scan;
  PolyField uf(u, boxonly);

  // the zero level set must contain a closed curve enclosing the seed
  const auto curves = extract_level(uf, 0.0, boxonly, cell);
  const LevelCurve* enclosing = nullptr;
  for (const auto& c : curves)
    if (c.closed && point_in_polygon(c.vertices, seed)) {
      if (!enclosing || std::abs(polygon_signed_area(c.vertices)) <
                            std::abs(polygon_signed_area(enclosing->vertices)))
        enclosing = &c;
    }
  if (!enclosing)
    fail("level-set-not-closed", "the zero level set does not close around the domain seed");

  // the connected component must not leak past its own boundary curve
  // (build_masked_grid raises level-set-not-closed when it reaches the box)
  const GridField mask = build_masked_grid([&u](Vec2 p) { return -u.eval(p); }, scan, cell, seed, 0.0);
  (void)mask;

  Bounds tight{1e300, 1e300, -1e300, -1e300};
  for (const Vec2& v : enclosing->vertices) {
    tight.x0 = std::min(tight.x0, v.x);
    tight.y0 = std::min(tight.y0, v.y);
    tight.x1 = std::max(tight.x1, v.x);
    tight.y1 = std::max(tight.y1, v.y);
  }
  const double margin = 2 * cell;
  tight = {tight.x0 - margin, tight.y0 - margin, tight.x1 + margin, tight.y1 + margin};

  FieldDomain dom;
  dom.box = tight;
  dom.level = [u](Vec2 p) { return -u.eval(p); };
  return dom;
}

}  // namespace

bool ReplicationCase::passed() const {
  for (const auto& f : facts)
    if (!f.passed) return false;
  return !facts.empty();
}

QuarticExample example_quartic(const Rational& alpha_bar) {
  if (alpha_bar <= 0) fail("level-set-not-closed", "alpha must be positive");
  // u = alpha - (y^2/2 + x^4 - 6x^2y^2 + y^4)
  Poly2 u = Poly2::constant(alpha_bar);
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(4, false);
  QuarticExample ex{std::move(u), {}, alpha_bar};
  ex.domain = validated_positive_component(ex.field, {-0.6, -0.35, 0.6, 0.35}, 1.0 / 256, {0, 0});
  return ex;
}

StarExample example_star_shaped(const Rational& A, const Rational& c) {
  if (!(A > Rational(35, 2))) fail("parse-error", "A must exceed 35/2");
  if (c <= 0) fail("level-set-not-closed", "c must be positive");
  Poly2 u = Poly2::constant(c);
  u = u - Poly2::monomial(0, 2, Rational(1, 2));
  u = u - harmonic_basis(3, false);
  u = u - harmonic_basis(4, false).scaled(A);
  StarExample ex{std::move(u), {}, A, c, {0, 0}, {to_double(Rational(-3) / (4 * A)), 0.0}};
  ex.domain = validated_positive_component(ex.field, {-0.2, -0.12, 0.16, 0.12}, 1.0 / 2048, {0, 0});
  return ex;
}

RadialExample example_radial_bessel() {
  const double P = bessel_j1_first_zero();
  RadialExample ex{FieldExpr::radial(Profile::bessel_j0, 0.0, P), {}, {}, P};
  ex.domain.box = {-8, -8, 8, 8};
  ex.window.box = {-0.75, -0.75, 0.75, 0.75};
  return ex;
}

Poly2 example_harmonic(int n, const Rational& a, const Rational& b) {
  if (a == 0 && b == 0) fail("zero-mix", "(a, b) must not both vanish");
  if (n < 2) fail("parse-error", "harmonic mixtures need n >= 2");
  return harmonic_basis(n, false).scaled(a) + harmonic_basis(n, true).scaled(b);
}

FieldExpr example_cosine() { return FieldExpr::along_coordinate(Profile::cosine, 1, 0.0); }

bool star_shaped_from_origin(const FieldDomain& dom, int directions) {
  for (int k = 0; k < directions; ++k) {
    const double t = 2 * M_PI * k / directions;
    const Vec2 dir{std::cos(t), std::sin(t)};
    const double tmax = dom.box.diameter();
    bool left = false;
    const int steps = 600;
    for (int s = 1; s <= steps; ++s) {
      const Vec2 p = dir * (tmax * s / steps);
      const bool in = dom.contains(p);
      if (left && in) return false;
      if (!in && s > 1) left = true;
    }
  }
  return true;
}

std::vector<std::string> replication_ids() {
  return {"example-4.1", "example-4.2", "radial-bessel", "cosine", "harmonic-3"};
}

namespace {

struct FactBuilder {
  ReplicationCase& rc;
  void near(const std::string& q, double actual, double expected, double tol,
            const std::string& oracle) {
    ExpectedFact f{q, ExpectedFact::Mode::near, expected, tol, oracle, actual, false};
    f.passed = std::isfinite(actual) && std::abs(actual - expected) <= tol;
    rc.facts.push_back(std::move(f));
  }
  void exact(const std::string& q, double actual, double expected, const std::string& oracle) {
    near(q, actual, expected, 0.0, oracle);
  }
  void at_most(const std::string& q, double actual, double bound, const std::string& oracle) {
    ExpectedFact f{q, ExpectedFact::Mode::at_most, bound, 0, oracle, actual, false};
    f.passed = std::isfinite(actual) && actual <= bound;
    rc.facts.push_back(std::move(f));
  }
  void at_least(const std::string& q, double actual, double bound, const std::string& oracle) {
    ExpectedFact f{q, ExpectedFact::Mode::at_least, bound, 0, oracle, actual, false};
    f.passed = std::isfinite(actual) && actual >= bound;
    rc.facts.push_back(std::move(f));
  }
  void boolean(const std::string& q, bool actual, const std::string& oracle) {
    exact(q, actual ? 1.0 : 0.0, 1.0, oracle);
  }
};

const CriticalPointReport* report_nearest(const std::vector<CriticalPointReport>& reports,
                                          Vec2 where) {
  const CriticalPointReport* best = nullptr;
  double dist = 1e300;
  for (const auto& r : reports) {
    const double d = (r.point.location - where).norm();
    if (d < dist) {
      dist = d;
      best = &r;
    }
  }
  return best;
}

ReplicationCase replicate_quartic() {
  ReplicationCase rc{"example-4.1",
                     "quartic degenerate maximum on its sublevel domain (-Lap u = 1)"};
  FactBuilder fb{rc};
  const Rational alpha(1, 200);
  rc.notes.push_back("alpha = 1/200 (validated closed; the threshold is 1/128)");
  const QuarticExample ex = example_quartic(alpha);
  PolyField u(ex.field, ex.domain, "example-4.1");
  const Nonlinearity f = Nonlinearity::constant(1.0);

  const auto points = find_critical_points(u, ex.domain, 0.0);
  fb.exact("critical_point_count", double(points.size()), 1.0, "exact-gradient-factorization");
  if (points.empty()) return rc;
  const auto& p0 = points.front();
  fb.near("critical_point_distance_to_origin", p0.location.norm(), 0.0, 1e-9,
          "exact-gradient-factorization");

  const CriticalPointReport rpt = classify_point(u, p0, &f);
  fb.boolean("class_is_degenerate_max", rpt.cls == PointClass::degenerate_max, "construction");
  fb.exact("u_yy", rpt.u_yy, -1.0, "exact-differentiation");
  fb.exact("n", rpt.n ? double(*rpt.n) : -1.0, 4.0, "exact-differentiation");
  fb.exact("alpha", rpt.alpha.value_or(0), -24.0, "exact-differentiation");
  fb.exact("index", rpt.index ? double(rpt.index->value) : -99.0, 1.0, "winding-number");
  fb.exact("theorem_violations", double(rpt.theorem_violations.size()), 0.0, "sign-laws");
  fb.boolean("solution_verified", rpt.solution_verified, "pde-residual-gate");
  fb.boolean("chain_residuals_all_zero",
             std::all_of(rpt.chain_residuals.begin(), rpt.chain_residuals.end(),
                         [](double r) { return r == 0.0; }) &&
                 !rpt.chain_residuals.empty(),
             "exact-differentiation");

  // negative minimum curvature on five level sets
  FieldDomain boxonly;
  boxonly.box = {-0.6, -0.35, 0.6, 0.35};
  PolyField uw(ex.field, boxonly, "example-4.1");
  const double abar = to_double(alpha);
  bool all_neg = true;
  for (const double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto curves = extract_level(uw, frac * abar, boxonly, 1.0 / 512);
    const LevelCurve* enclosing = nullptr;
    for (const auto& cv : curves)
      if (cv.closed && point_in_polygon(cv.vertices, {0, 0})) enclosing = &cv;
    if (!enclosing) {
      all_neg = false;
      break;
    }
    const auto [where, kmin] = min_curvature_on_curve(uw, *enclosing);
    if (!(kmin < -1e-6)) all_neg = false;
  }
  fb.boolean("min_curvature_negative_on_5_levels", all_neg, "curvature-closed-form");

  // semi-stability on a solver grid (h = 1/128)
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::level;
  cfg.domain.box = ex.domain.box;
  cfg.domain.level = FieldExpr::scale(-1.0, poly_to_expr(ex.field));
  cfg.domain.seed = Vec2{0, 0};
  cfg.h = 1.0 / 128;
  cfg.f = f;
  const SolveResult sol = solve_dirichlet(cfg);
  fb.at_most("solver_residual", sol.residual_maxnorm, cfg.newton_tol, "discrete-residual");
  double grid_err = 0;
  for (const auto& [i, j] : sol.field.interior_nodes())
    grid_err = std::max(grid_err, std::abs(sol.field.value(i, j) - ex.field.eval(sol.field.node(i, j))));
  fb.at_most("grid_vs_closed_form_max_error", grid_err, 25.0 / (128.0 * 128.0),
             "closed-form-reference");
  const SpectrumResult spec = linearized_spectrum(sol.field, f, 1);
  fb.boolean("semi_stable", spec.semi_stable, "dirichlet-laplacian-positivity");
  fb.exact("morse_index", double(spec.morse_index), 0.0, "dirichlet-laplacian-positivity");
  return rc;
}

ReplicationCase replicate_star() {
  ReplicationCase rc{"example-4.2",
                     "cubic-quartic star-shaped domain with a saddle and a maximum (-Lap u = 1)"};
  FactBuilder fb{rc};
  const Rational A(18), c(1, 10000);
  rc.notes.push_back("A = 18, c = 1e-4 (validated closed; c = 1e-3 fails validation)");
  const StarExample ex = example_star_shaped(A, c);
  PolyField u(ex.field, ex.domain, "example-4.2");
  const Nonlinearity f = Nonlinearity::constant(1.0);

  const auto points = find_critical_points(u, ex.domain, 0.0);
  fb.exact("critical_point_count", double(points.size()), 2.0, "exact-gradient-factorization");
  if (points.size() != 2) return rc;

  std::vector<CriticalPointReport> reports;
  for (const auto& p : points) reports.push_back(classify_point(u, p, &f));
  const CriticalPointReport* saddle = report_nearest(reports, ex.saddle);
  const CriticalPointReport* maxp = report_nearest(reports, ex.maximum);
  if (saddle == maxp) {
    fb.boolean("distinct_points_resolved", false, "construction");
    return rc;
  }

  fb.near("p1_x", maxp->point.location.x, -1.0 / 24, 1e-8, "exact-gradient-factorization");
  fb.near("p1_y", maxp->point.location.y, 0.0, 1e-8, "exact-gradient-factorization");
  fb.boolean("saddle_class_is_degenerate_saddle", saddle->cls == PointClass::degenerate_saddle,
             "circle-sampling");
  fb.exact("saddle_u_yy", saddle->u_yy, -1.0, "exact-differentiation");
  fb.exact("saddle_n", saddle->n ? double(*saddle->n) : -1.0, 3.0, "exact-differentiation");
  fb.exact("saddle_alpha", saddle->alpha.value_or(0), -6.0, "exact-differentiation");
  fb.exact("saddle_index", saddle->index ? double(saddle->index->value) : -99.0, 0.0,
           "winding-number");
  fb.boolean("max_class_is_nondegenerate_max", maxp->cls == PointClass::nondegenerate_max,
             "exact-differentiation");
  fb.near("max_hessian_eig1", maxp->hessian_eigenvalues[0], -7.0 / 8, 1e-14,
          "exact-differentiation");
  fb.near("max_hessian_eig2", maxp->hessian_eigenvalues[1], -1.0 / 8, 1e-14,
          "exact-differentiation");
  fb.exact("max_index", maxp->index ? double(maxp->index->value) : -99.0, 1.0, "winding-number");
  fb.exact("violations_total",
           double(saddle->theorem_violations.size() + maxp->theorem_violations.size()), 0.0,
           "sign-laws");

  // Poincare-Hopf over an enclosing level curve u = c/2
  FieldDomain boxonly;
  boxonly.box = {-0.2, -0.12, 0.16, 0.12};
  PolyField uw(ex.field, boxonly, "example-4.2");
  const auto curves = extract_level(uw, to_double(c) / 2, boxonly, 1.0 / 2048);
  const LevelCurve* enclosing = nullptr;
  for (const auto& cv : curves)
    if (cv.closed && point_in_polygon(cv.vertices, {0, 0}) &&
        point_in_polygon(cv.vertices, ex.maximum))
      enclosing = &cv;
  fb.boolean("enclosing_level_curve_found", enclosing != nullptr, "trace-connectivity");
  if (enclosing) {
    const int deg = boundary_degree(uw, enclosing->vertices);
    fb.exact("poincare_hopf_sum", double(deg), 1.0, "winding-number");
  }
  fb.boolean("star_shaped_from_origin", star_shaped_from_origin(ex.domain), "ray-test");

  // semi-stability on a solver grid
  SolveConfig cfg;
  cfg.domain.kind = DomainSpec::Kind::level;
  cfg.domain.box = ex.domain.box;
  cfg.domain.level = FieldExpr::scale(-1.0, poly_to_expr(ex.field));
  cfg.domain.seed = Vec2{0, 0};
  cfg.h = 1.0 / 2048;
  cfg.f = f;
  const SolveResult sol = solve_dirichlet(cfg);
  const SpectrumResult spec = linearized_spectrum(sol.field, f, 1);
  fb.boolean("semi_stable", spec.semi_stable, "dirichlet-laplacian-positivity");
  fb.exact("morse_index", double(spec.morse_index), 0.0, "dirichlet-laplacian-positivity");
  return rc;
}

ReplicationCase replicate_bessel() {
  ReplicationCase rc{"radial-bessel", "radial J0 field with a circle of minima through the origin"};
  FactBuilder fb{rc};
  const RadialExample ex = example_radial_bessel();
  ExprField u(ex.field, ex.domain, "radial-bessel");
  const Nonlinearity f = Nonlinearity::identity();

  // oracle values from the radial derivative table
  const double P = ex.ring_radius;
  const double upp = -std::cyl_bessel_j(0, P);  // u''(P) = -f(u(P))
  const double uyy_exp = upp;
  const double uxxy_exp = -upp / P;
  const double uxxxx_exp = 3 * upp / (P * P);

  std::uint64_t seed = 12345;
  double max_res = 0;
  for (int k = 0; k < 20; ++k) {
    const Vec2 p{-0.7 + 1.4 * splitmix(seed), -0.7 + 1.4 * splitmix(seed)};
    max_res = std::max(max_res, std::abs(pde_residual(u, f, p)));
  }
  fb.at_most("pde_residual_max", max_res, 1e-10, "bessel-ode");

  const auto points = find_critical_points(u, ex.window, 0.0);
  int curveish = 0;
  double ring_err = 0;
  for (const auto& p : points) {
    if (p.isolation == Isolation::curve_suspected) ++curveish;
    ring_err = std::max(ring_err,
                        std::abs(std::hypot(p.location.x, p.location.y - P) - P));
  }
  fb.at_least("curve_suspected_points", double(curveish), 5.0, "radial-critical-circle");
  fb.at_most("ring_distance_max", ring_err, 1e-7, "radial-critical-circle");

  const CriticalPoint origin{{0, 0}, 0.0, Isolation::curve_suspected};
  const CriticalPointReport rpt = classify_point(u, origin, &f);
  fb.boolean("class_is_non_isolated_extremum", rpt.cls == PointClass::non_isolated_extremum,
             "radial-critical-circle");
  fb.exact("n", rpt.n ? double(*rpt.n) : -1.0, 3.0, "bessel-recurrence");
  fb.exact("l", rpt.l ? double(*rpt.l) : -1.0, 4.0, "bessel-recurrence");
  fb.near("u_yy", rpt.u_yy, uyy_exp, 1e-6, "bessel-recurrence");
  fb.near("u_xxy", rpt.beta.value_or(0), uxxy_exp, 1e-6, "bessel-recurrence");
  fb.near("u_xxxx", rpt.pure_x_coeff_at_l.value_or(0), uxxxx_exp, 1e-6, "bessel-recurrence");
  const double beta = rpt.beta.value_or(0);
  fb.at_most("equality_gap_relative",
             rpt.equality_1_8_gap ? *rpt.equality_1_8_gap / (beta * beta) : 1e300, 1e-6,
             "bessel-recurrence");
  fb.exact("theorem_violations", double(rpt.theorem_violations.size()), 0.0, "sign-laws");

  std::vector<double> radii;
  for (int k = 4; k <= 9; ++k) radii.push_back(std::pow(0.5, k));
  const SlopeFit fit = expansion_residual_slope(u, rpt, radii);
  fb.at_least("expansion_residual_slope", fit.exact ? 99.0 : fit.slope, 4.5, "taylor-remainder");
  return rc;
}

ReplicationCase replicate_cosine() {
  ReplicationCase rc{"cosine", "u = cos y: a line of maxima (u_x == 0 case)"};
  FactBuilder fb{rc};
  FieldDomain dom;
  dom.box = {-1, -1, 1, 1};
  ExprField u(example_cosine(), dom, "cosine");
  const Nonlinearity f = Nonlinearity::identity();

  std::uint64_t seed = 777;
  double max_res = 0;
  for (int k = 0; k < 20; ++k) {
    const Vec2 p{-1 + 2 * splitmix(seed), -1 + 2 * splitmix(seed)};
    max_res = std::max(max_res, std::abs(pde_residual(u, f, p)));
  }
  fb.at_most("pde_residual_max", max_res, 1e-12, "cosine-identity");

  const auto points = find_critical_points(u, dom, 0.0);
  int curveish = 0;
  double max_abs_y = 0;
  for (const auto& p : points) {
    if (p.isolation == Isolation::curve_suspected) ++curveish;
    max_abs_y = std::max(max_abs_y, std::abs(p.location.y));
  }
  fb.at_least("curve_suspected_points", double(curveish), 5.0, "line-of-maxima");
  fb.at_most("max_abs_y_of_points", max_abs_y, 1e-8, "line-of-maxima");

  const CriticalPointReport* origin = nullptr;
  std::vector<CriticalPointReport> reports;
  for (const auto& p : points) reports.push_back(classify_point(u, p, &f));
  origin = report_nearest(reports, {0, 0});
  fb.boolean("order_exhausted_n_absent", origin && !origin->n, "pure-1d-profile");
  fb.boolean("class_is_non_isolated_extremum",
             origin && origin->cls == PointClass::non_isolated_extremum, "line-of-maxima");
  return rc;
}

ReplicationCase replicate_harmonic3() {
  ReplicationCase rc{"harmonic-3", "Re(z^3): kernel-degenerate saddle of index -2"};
  FactBuilder fb{rc};
  FieldDomain dom;
  dom.box = {-1, -1, 1, 1};
  PolyField u(example_harmonic(3, 1, 0), dom, "harmonic-3");
  const Nonlinearity f = Nonlinearity::constant(0.0);

  const auto points = find_critical_points(u, dom, 0.0);
  fb.exact("critical_point_count", double(points.size()), 1.0, "exact-gradient-factorization");
  if (points.empty()) return rc;
  const CriticalPointReport rpt = classify_point(u, points.front(), &f);
  fb.boolean("class_is_degenerate_saddle", rpt.cls == PointClass::degenerate_saddle,
             "circle-sampling");
  fb.exact("u_yy", rpt.u_yy, 0.0, "exact-differentiation");
  fb.exact("index", rpt.index ? double(rpt.index->value) : -99.0, -2.0, "winding-number");
  fb.exact("n", rpt.n ? double(*rpt.n) : -1.0, 3.0, "exact-differentiation");
  fb.exact("theorem_violations", double(rpt.theorem_violations.size()), 0.0, "sign-laws");
  fb.boolean("chain_residuals_all_zero",
             !rpt.chain_residuals.empty() &&
                 std::all_of(rpt.chain_residuals.begin(), rpt.chain_residuals.end(),
                             [](double r) { return r == 0.0; }),
             "harmonic-alternation");
  return rc;
}

}  // namespace

ReplicationCase run_replication(const std::string& id) {
  if (id == "example-4.1") return replicate_quartic();
  if (id == "example-4.2") return replicate_star();
  if (id == "radial-bessel") return replicate_bessel();
  if (id == "cosine") return replicate_cosine();
  if (id == "harmonic-3") return replicate_harmonic3();
  fail("unknown-id", "no replication case named '" + id + "'");
}

}  // namespace morse2d
