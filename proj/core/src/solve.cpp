#include "morse2d/solve.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <fstream>
#include <sstream>

#include "assemble.hpp"
#include "morse2d/errors.hpp"

namespace morse2d {

void SolveConfig::validate() const {
  if (h <= 0) fail("parse-error", "grid spacing h must be positive");
  if (newton_tol <= 0) fail("parse-error", "newton tolerance must be positive");
  if (damping <= 0 || damping > 1) fail("parse-error", "damping must lie in (0,1]");
  if (max_iterations < 1) fail("parse-error", "max_iter must be at least 1");
  if (domain.box.width() <= 0 || domain.box.height() <= 0) fail("parse-error", "empty domain box");
}

SolveConfig parse_solve_config(std::istream& is) {
  SolveConfig cfg;
  std::string line;
  bool have_domain = false, have_bbox = false;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      // ignore blank lines, reject stray text
      std::istringstream probe(line);
      std::string junk;
      if (probe >> junk) fail("parse-error", "config line without '=': " + line);
      continue;
    }
    std::istringstream ks(line.substr(0, eq));
    std::string key;
    ks >> key;
    std::string value = line.substr(eq + 1);
    // trim
    const auto b = value.find_first_not_of(" \t");
    const auto e = value.find_last_not_of(" \t\r");
    value = b == std::string::npos ? "" : value.substr(b, e - b + 1);
    if (value.empty()) fail("parse-error", "empty value for key " + key);

    std::istringstream vs(value);
    if (key == "domain") {
      std::string kind;
      vs >> kind;
      if (kind == "rect") {
        if (!(vs >> cfg.domain.box.x0 >> cfg.domain.box.y0 >> cfg.domain.box.x1 >> cfg.domain.box.y1))
          fail("parse-error", "domain rect needs x0 y0 x1 y1");
        cfg.domain.kind = DomainSpec::Kind::rect;
      } else if (kind == "level") {
        std::string expr;
        std::getline(vs, expr);
        cfg.domain.kind = DomainSpec::Kind::level;
        cfg.domain.level = FieldExpr::parse_prefix(expr);
      } else {
        fail("parse-error", "domain must be 'rect ...' or 'level <expr>'");
      }
      have_domain = true;
    } else if (key == "bbox") {
      if (!(vs >> cfg.domain.box.x0 >> cfg.domain.box.y0 >> cfg.domain.box.x1 >> cfg.domain.box.y1))
        fail("parse-error", "bbox needs x0 y0 x1 y1");
      have_bbox = true;
    } else if (key == "seed") {
      Vec2 s;
      if (!(vs >> s.x >> s.y)) fail("parse-error", "seed needs x y");
      cfg.domain.seed = s;
    } else if (key == "h") {
      vs >> cfg.h;
    } else if (key == "f") {
      cfg.f = Nonlinearity::parse(value);
    } else if (key == "bc") {
      vs >> cfg.boundary_value;
    } else if (key == "tol") {
      vs >> cfg.newton_tol;
    } else if (key == "max_iter") {
      vs >> cfg.max_iterations;
    } else if (key == "damping") {
      vs >> cfg.damping;
    } else {
      fail("parse-error", "unknown config key '" + key + "'");
    }
  }
  if (!have_domain) fail("parse-error", "config is missing 'domain'");
  if (cfg.domain.kind == DomainSpec::Kind::level && !have_bbox)
    fail("parse-error", "level domains need a 'bbox'");
  cfg.validate();
  return cfg;
}

SolveConfig parse_solve_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("parse-error", "cannot open config file: " + path);
  return parse_solve_config(is);
}

namespace {

GridField make_domain_grid(const SolveConfig& cfg) {
  if (cfg.domain.kind == DomainSpec::Kind::rect)
    return build_rect_grid(cfg.domain.box, cfg.h, cfg.boundary_value);
  const FieldExpr& phi = cfg.domain.level;
  return build_masked_grid([&phi](Vec2 p) { return phi.value(p); }, cfg.domain.box, cfg.h,
                           cfg.domain.seed, cfg.boundary_value);
}

using detail::Discretization;
using detail::discretize;

}  // namespace

SolveResult solve_dirichlet(const SolveConfig& cfg, const ScalarField* initial) {
  cfg.validate();
  GridField g = make_domain_grid(cfg);
  Discretization d = discretize(g);
  const int n = int(d.nodes.size());
  if (n == 0) fail("domain-empty", "no interior unknowns");

  // Arms shorter than the grid step make boundary values at cut points part
  // of the right-hand side; g carries boundary_value at boundary NODES, but
  // the cut-point Dirichlet value is also boundary_value, so boundary_term
  // built from node values is correct for constant boundary data.

  Eigen::VectorXd u(n);
  if (initial) {
    for (int k = 0; k < n; ++k) u[k] = initial->value(g.node(d.nodes[size_t(k)].first, d.nodes[size_t(k)].second));
  } else {
    // default start: solution of -Lap u = f(0)
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(d.neg_lap);
    if (lu.info() != Eigen::Success) fail("singular-jacobian", "Laplacian factorization failed");
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, cfg.f.value(0.0)) - d.boundary_term;
    u = lu.solve(rhs);
  }

  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd r = d.neg_lap * v + d.boundary_term;
    for (int k = 0; k < n; ++k) r[k] -= cfg.f.value(v[k]);
    return r;  // -Lap u - f(u) (with boundary data folded in)
  };

  Eigen::VectorXd r = residual(u);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  int iters = 0;
  while (rnorm > cfg.newton_tol) {
    if (iters >= cfg.max_iterations)
      fail("newton-diverged", "residual " + std::to_string(rnorm) + " after max iterations");
    Eigen::SparseMatrix<double> jac = d.neg_lap;
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(size_t(n));
    for (int k = 0; k < n; ++k) diag.emplace_back(k, k, -cfg.f.derivative(u[k], 1));
    Eigen::SparseMatrix<double> fprime(n, n);
    fprime.setFromTriplets(diag.begin(), diag.end());
    jac += fprime;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
    if (lu.info() != Eigen::Success) fail("singular-jacobian", "Newton Jacobian is singular");
    const Eigen::VectorXd step = lu.solve(-r);

    double lambda = cfg.damping;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      Eigen::VectorXd trial = u + lambda * step;
      Eigen::VectorXd tr = residual(trial);
      const double tnorm = tr.lpNorm<Eigen::Infinity>();
      if (tnorm < rnorm || tnorm <= cfg.newton_tol) {
        u = std::move(trial);
        r = std::move(tr);
        rnorm = tnorm;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++iters;
    if (!accepted) fail("newton-diverged", "damping exhausted without residual reduction");
  }

  for (int k = 0; k < n; ++k) g.value(d.nodes[size_t(k)].first, d.nodes[size_t(k)].second) = u[k];
  return {std::move(g), iters, rnorm};
}

OrderFit convergence_order(const SolveConfig& cfg, const ScalarField& reference,
                           std::span<const double> h_list) {
  if (h_list.size() < 3) fail("insufficient-grids", "need at least 3 spacings");
  OrderFit fit;
  double scale = 0.0;
  for (const double h : h_list) {
    SolveConfig c = cfg;
    c.h = h;
    const SolveResult res = solve_dirichlet(c);
    double err = 0.0;
    for (const auto& [i, j] : res.field.interior_nodes()) {
      const Vec2 p = res.field.node(i, j);
      const double v = res.field.value(i, j);
      err = std::max(err, std::abs(v - reference.value(p)));
      scale = std::max(scale, std::abs(v));
    }
    fit.hs.push_back(h);
    fit.errors.push_back(err);
  }
  bool all_tiny = true;
  for (const double e : fit.errors)
    if (e > 1e-12 * std::max(scale, 1.0)) all_tiny = false;
  if (all_tiny) {
    fit.exact = true;
    return fit;
  }
  // least-squares slope of log(err) vs log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = int(fit.hs.size());
  for (int k = 0; k < m; ++k) {
    const double X = std::log(fit.hs[size_t(k)]), Y = std::log(std::max(fit.errors[size_t(k)], 1e-300));
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  fit.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

}  // namespace morse2d
