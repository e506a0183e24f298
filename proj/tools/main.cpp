// morse2d command line: analyze / solve / levelset / index / replicate / verify.
// Exit codes: 0 success, 1 theorem violation on a verified solution (or a
// failed replication fact), 2 usage or input errors.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "morse2d/classify.hpp"
#include "morse2d/errors.hpp"
#include "morse2d/field_io.hpp"
#include "morse2d/levelset.hpp"
#include "morse2d/replicate.hpp"
#include "morse2d/report.hpp"
#include "morse2d/solve.hpp"
#include "morse2d/spectrum.hpp"
#include "morse2d/winding.hpp"

namespace fs = std::filesystem;
using namespace morse2d;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) fail("parse-error", "cannot write " + path);
  os << text;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

/// Analysis field + domain from a loaded file. With a nonlinearity given,
/// coefficient-backed fields are read as Dirichlet solutions: the domain is
/// the connected component of {u > 0} holding the maximum over the scan box.
std::shared_ptr<ScalarField> make_field(const LoadedField& lf, Bounds scan, bool dirichlet_domain,
                                        const std::string& label) {
  if (std::holds_alternative<GridField>(lf))
    return std::make_shared<GridBackedField>(std::get<GridField>(lf), label);

  FieldDomain dom;
  dom.box = scan;
  std::shared_ptr<ScalarField> plain;
  if (std::holds_alternative<Poly2>(lf))
    plain = std::make_shared<PolyField>(std::get<Poly2>(lf), dom, label);
  else
    plain = std::make_shared<ExprField>(std::get<FieldExpr>(lf), dom, label);
  if (!dirichlet_domain) return plain;

  // locate the maximum over the scan lattice, flood-fill its positive component
  const int n = 128;
  std::vector<char> pos(size_t(n) * n, 0);
  double best = -1e300;
  int bi = -1, bj = -1;
  auto node = [&](int i, int j) {
    return Vec2{scan.x0 + scan.width() * i / (n - 1), scan.y0 + scan.height() * j / (n - 1)};
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = plain->value(node(i, j));
      pos[size_t(j) * n + i] = v > 0;
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (best <= 0) fail("domain-empty", "the field is nowhere positive on the scan box");
  std::vector<char> comp(size_t(n) * n, 0);
  std::vector<std::pair<int, int>> stack{{bi, bj}};
  comp[size_t(bj) * n + bi] = 1;
  Bounds tight{1e300, 1e300, -1e300, -1e300};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const Vec2 p = node(i, j);
    tight.x0 = std::min(tight.x0, p.x);
    tight.y0 = std::min(tight.y0, p.y);
    tight.x1 = std::max(tight.x1, p.x);
    tight.y1 = std::max(tight.y1, p.y);
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (a < 0 || b < 0 || a >= n || b >= n) continue;
      if (pos[size_t(b) * n + a] && !comp[size_t(b) * n + a]) {
        comp[size_t(b) * n + a] = 1;
        stack.emplace_back(a, b);
      }
    }
  }
  const double mx = scan.width() / (n - 1), my = scan.height() / (n - 1);
  FieldDomain dd;
  dd.box = {tight.x0 - 2 * mx, tight.y0 - 2 * my, tight.x1 + 2 * mx, tight.y1 + 2 * my};
  if (std::holds_alternative<Poly2>(lf)) {
    const Poly2 u = std::get<Poly2>(lf);
    dd.level = [u](Vec2 p) { return -u.eval(p); };
    return std::make_shared<PolyField>(u, dd, label);
  }
  const FieldExpr e = std::get<FieldExpr>(lf);
  dd.level = [e](Vec2 p) { return -e.value(p); };
  return std::make_shared<ExprField>(e, dd, label);
}

int run(int argc, char** argv) {
  CLI::App app{"critical-point classification for plane fields solving -Lap u = f(u)"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker count (results are identical for any value)")
      ->check(CLI::PositiveNumber);
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory");

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "find and classify critical points");
  std::string an_field, an_f;
  std::vector<double> an_bbox;
  double an_spacing = 0, tol_newton = 1e-10, tol_gate = 1e-6;
  analyze->add_option("field", an_field, "field file")->required();
  analyze->add_option("--f", an_f, "nonlinearity f(u), prefix notation");
  analyze->add_option("--bbox", an_bbox, "scan box x0 y0 x1 y1")->expected(4);
  analyze->add_option("--seed-spacing", an_spacing, "critical point seed spacing");
  analyze->add_option("--tol-newton", tol_newton, "solver/critical point tolerance");
  analyze->add_option("--tol-gate", tol_gate, "relative pde-residual gate");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem from a config file");
  std::string so_config;
  solve->add_option("config", so_config, "key = value config file")->required();

  // ---- levelset ----
  auto* levelset = app.add_subcommand("levelset", "trace level sets and report min curvature");
  std::string ls_field, ls_levels;
  double ls_cell = 0;
  bool ls_rel = false;
  std::vector<double> ls_bbox;
  levelset->add_option("field", ls_field, "field file")->required();
  levelset->add_option("--levels", ls_levels, "comma-separated levels")->required();
  levelset->add_flag("--rel", ls_rel, "levels are fractions of the field maximum");
  levelset->add_option("--cell", ls_cell, "tracing cell size");
  levelset->add_option("--bbox", ls_bbox, "tracing box x0 y0 x1 y1")->expected(4);

  // ---- index ----
  auto* index = app.add_subcommand("index", "winding number of grad u about a point");
  std::string ix_field;
  std::vector<double> ix_at, ix_bbox;
  double ix_r = 0;
  int ix_m = 64;
  index->add_option("field", ix_field, "field file")->required();
  index->add_option("--at", ix_at, "point x y")->expected(2)->required();
  index->add_option("--r", ix_r, "fixed circle radius (default: robust ladder)");
  index->add_option("--m", ix_m, "initial samples");
  index->add_option("--bbox", ix_bbox, "field box x0 y0 x1 y1")->expected(4);

  // ---- replicate ----
  auto* replicate = app.add_subcommand("replicate", "run a registered replication case");
  std::string rep_id;
  replicate->add_option("id", rep_id, "case id")->required();

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "pde residual gate plus classification checks");
  std::string vf_field, vf_f = "1";
  std::vector<double> vf_bbox;
  verify->add_option("field", vf_field, "field file")->required();
  verify->add_option("--f", vf_f, "nonlinearity f(u)")->required();
  verify->add_option("--bbox", vf_bbox, "scan box x0 y0 x1 y1")->expected(4);

  CLI11_PARSE(app, argc, argv);
  Timer timer;

  auto box_of = [](const std::vector<double>& v, Bounds fallback) {
    return v.size() == 4 ? Bounds{v[0], v[1], v[2], v[3]} : fallback;
  };
  auto manifest_for = [&](const std::string& cmd, const std::vector<std::string>& inputs) {
    RunManifest m;
    m.command = cmd;
    m.input_paths = inputs;
    m.parameters.emplace_back("threads", std::to_string(threads));
    m.artifact_version = kVersion;
    return m;
  };

  if (*analyze) {
    const LoadedField lf = read_field_file(an_field);
    const Bounds scan = box_of(an_bbox, {-1, -1, 1, 1});
    auto field = make_field(lf, scan, !an_f.empty(), fs::path(an_field).filename().string());
    std::optional<Nonlinearity> f;
    if (!an_f.empty()) f = Nonlinearity::parse(an_f);

    const auto points = find_critical_points(*field, field->domain(), an_spacing);
    if (points.empty() && field->as_grid() && field->as_grid()->count(NodeKind::interior) == 0)
      fail("domain-empty", "grid has no interior nodes");
    ClassifySettings settings;
    settings.solution_gate_rel = tol_gate;
    std::vector<CriticalPointReport> reports;
    for (const auto& p : points)
      reports.push_back(classify_point(*field, p, f ? &*f : nullptr, settings));

    RunManifest m = manifest_for("analyze", {an_field});
    if (!an_f.empty()) m.parameters.emplace_back("f", f->to_string());
    m.parameters.emplace_back("seed_spacing", format17(an_spacing));
    m.tolerances.emplace_back("tol_newton", tol_newton);
    m.tolerances.emplace_back("tol_gate", tol_gate);
    const std::string path = out_path(out_dir, fs::path(an_field).stem().string() + ".analysis.json");
    m.output_paths = {path};
    m.wall_clock_seconds = timer.seconds();
    write_text(path, render_analysis_report(m, field->describe(),
                                            f ? std::optional<std::string>(f->to_string())
                                              : std::nullopt,
                                            reports));
    bool violation = false;
    for (const auto& r : reports)
      if (r.solution_verified && !r.theorem_violations.empty()) violation = true;
    std::cout << "analyze: " << points.size() << " critical point(s) -> " << path << "\n";
    for (const auto& r : reports) {
      std::cout << "  (" << format17(r.point.location.x) << ", " << format17(r.point.location.y)
                << ") " << to_string(r.cls);
      if (r.index) std::cout << " index " << r.index->value;
      if (!r.theorem_violations.empty()) {
        std::cout << " violations:";
        for (const auto& v : r.theorem_violations) std::cout << ' ' << v;
      }
      std::cout << "\n";
    }
    return violation ? 1 : 0;
  }

  if (*solve) {
    const SolveConfig cfg = parse_solve_config_file(so_config);
    const SolveResult res = solve_dirichlet(cfg);
    const std::string grid_path = out_path(out_dir, fs::path(so_config).stem().string() + ".grid");
    write_field_file(grid_path, res.field);
    RunManifest m = manifest_for("solve", {so_config});
    m.parameters.emplace_back("h", format17(cfg.h));
    m.parameters.emplace_back("f", cfg.f.to_string());
    m.tolerances.emplace_back("tol_newton", cfg.newton_tol);
    const std::string man_path = grid_path + ".manifest.json";
    m.output_paths = {grid_path, man_path};
    m.wall_clock_seconds = timer.seconds();
    write_text(man_path, render_solve_manifest(m, res.residual_maxnorm, res.newton_iterations,
                                               res.field.count(NodeKind::interior)));
    std::cout << "solve: residual " << format17(res.residual_maxnorm) << " after "
              << res.newton_iterations << " Newton step(s) -> " << grid_path << "\n";
    return 0;
  }

  if (*levelset) {
    const LoadedField lf = read_field_file(ls_field);
    const Bounds scan = box_of(ls_bbox, {-1, -1, 1, 1});
    auto field = make_field(lf, scan, false, fs::path(ls_field).filename().string());
    const FieldDomain& dom = field->domain();
    double cell = ls_cell > 0 ? ls_cell : dom.diameter() / 512;

    std::vector<double> levels;
    {
      std::stringstream ss(ls_levels);
      std::string tok;
      while (std::getline(ss, tok, ',')) levels.push_back(std::stod(tok));
    }
    if (ls_rel) {
      double umax = -1e300;
      for (int j = 0; j <= 64; ++j)
        for (int i = 0; i <= 64; ++i) {
          const Vec2 p{dom.box.x0 + dom.box.width() * i / 64,
                       dom.box.y0 + dom.box.height() * j / 64};
          if (dom.contains(p)) umax = std::max(umax, field->value(p));
        }
      for (double& l : levels) l *= umax;
    }

    std::vector<std::pair<double, double>> level_kmin;
    std::vector<std::string> files;
    int li = 0;
    for (const double lvl : levels) {
      const auto curves = extract_level(*field, lvl, dom, cell);
      double kmin = std::numeric_limits<double>::infinity();
      int ci = 0;
      for (const auto& c : curves) {
        const std::string path =
            out_path(out_dir, "curve_" + std::to_string(li) + "_" + std::to_string(ci++) + ".csv");
        write_curve_csv(path, *field, c);
        files.push_back(path);
        try {
          kmin = std::min(kmin, min_curvature_on_curve(*field, c).second);
        } catch (const Error&) {
        }
      }
      level_kmin.emplace_back(lvl, kmin);
      ++li;
    }
    RunManifest m = manifest_for("levelset", {ls_field});
    m.parameters.emplace_back("levels", ls_levels);
    m.parameters.emplace_back("cell", format17(cell));
    const std::string path = out_path(out_dir, fs::path(ls_field).stem().string() + ".levels.json");
    m.output_paths = files;
    m.output_paths.push_back(path);
    m.wall_clock_seconds = timer.seconds();
    write_text(path, render_levelset_summary(m, field->describe(), level_kmin, files));
    for (const auto& [lvl, kmin] : level_kmin)
      std::cout << "level " << format17(lvl) << ": k_min " << format17(kmin) << "\n";
    std::cout << "levelset: summary -> " << path << "\n";
    return 0;
  }

  if (*index) {
    const LoadedField lf = read_field_file(ix_field);
    const Bounds scan = box_of(ix_bbox, {-1, -1, 1, 1});
    auto field = make_field(lf, scan, false, fs::path(ix_field).filename().string());
    const Vec2 at{ix_at[0], ix_at[1]};
    const IndexResult r =
        ix_r > 0 ? gradient_index(*field, at, ix_r, ix_m) : robust_index(*field, at);
    RunManifest m = manifest_for("index", {ix_field});
    m.parameters.emplace_back("at", format17(at.x) + " " + format17(at.y));
    const std::string path = out_path(out_dir, fs::path(ix_field).stem().string() + ".index.json");
    m.output_paths = {path};
    m.wall_clock_seconds = timer.seconds();
    write_text(path, render_index_report(m, field->describe(), r));
    std::cout << "index " << r.value << " (radius " << format17(r.radius) << ", "
              << r.samples << " samples, certified " << (r.certified ? "yes" : "no") << ")\n";
    return 0;
  }

  if (*replicate) {
    const ReplicationCase rc = run_replication(rep_id);
    RunManifest m = manifest_for("replicate", {});
    m.parameters.emplace_back("id", rep_id);
    const std::string path = out_path(out_dir, "replication_" + rep_id + ".json");
    m.output_paths = {path};
    m.wall_clock_seconds = std::nullopt;  // replication reports are byte-stable
    write_text(path, render_replication_report(m, rc));
    std::cerr << "replicate " << rep_id << ": " << timer.seconds() << " s\n";
    int passed = 0;
    for (const auto& fct : rc.facts) passed += fct.passed;
    std::cout << "replicate " << rep_id << ": " << passed << "/" << rc.facts.size()
              << " facts pass -> " << path << "\n";
    return rc.passed() ? 0 : 1;
  }

  if (*verify) {
    const LoadedField lf = read_field_file(vf_field);
    const Bounds scan = box_of(vf_bbox, {-1, -1, 1, 1});
    auto field = make_field(lf, scan, true, fs::path(vf_field).filename().string());
    const Nonlinearity f = Nonlinearity::parse(vf_f);
    const bool verified = verify_solution(*field, f);
    double max_res = 0;
    const Bounds b = field->domain().box;
    for (int j = 1; j < 21; ++j)
      for (int i = 1; i < 21; ++i) {
        const Vec2 p{b.x0 + b.width() * i / 21, b.y0 + b.height() * j / 21};
        if (!field->domain().contains(p)) continue;
        try {
          max_res = std::max(max_res, std::abs(pde_residual(*field, f, p)));
        } catch (const Error&) {
        }
      }
    const auto points = find_critical_points(*field, field->domain(), 0.0);
    std::vector<CriticalPointReport> reports;
    for (const auto& p : points) reports.push_back(classify_point(*field, p, &f));
    RunManifest m = manifest_for("verify", {vf_field});
    m.parameters.emplace_back("f", f.to_string());
    const std::string path = out_path(out_dir, fs::path(vf_field).stem().string() + ".verify.json");
    m.output_paths = {path};
    m.wall_clock_seconds = timer.seconds();
    write_text(path, render_verify_report(m, field->describe(), f.to_string(), verified, max_res,
                                          reports));
    bool violation = false;
    for (const auto& r : reports)
      if (r.solution_verified && !r.theorem_violations.empty()) violation = true;
    std::cout << "verify: " << (verified ? "solution verified" : "NOT a solution at the gate")
              << ", max residual " << format17(max_res) << ", " << points.size()
              << " critical point(s)" << (violation ? ", THEOREM VIOLATIONS" : "") << " -> "
              << path << "\n";
    return violation ? 1 : 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
