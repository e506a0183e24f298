#include "morse2d/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "morse2d/errors.hpp"

namespace morse2d {

std::string format17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(std::ostream& os, const Poly2& p) {
  os << "FIELD poly\n";
  for (const auto& [k, c] : p.terms())
    os << k.first << ' ' << k.second << ' ' << rational_to_string(c) << '\n';
}

void write_field(std::ostream& os, const FieldExpr& e) {
  os << "FIELD expr\n" << e.to_prefix() << '\n';
}

void write_field(std::ostream& os, const GridField& g) {
  os << "FIELD grid\n";
  os << "GRID2D " << g.nx() << ' ' << g.ny() << ' ' << format17(g.origin().x) << ' '
     << format17(g.origin().y) << ' ' << format17(g.hx()) << ' ' << format17(g.hy()) << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) os << ' ';
      os << format17(g.kind(i, j) == NodeKind::exterior ? std::numeric_limits<double>::quiet_NaN()
                                                        : g.value(i, j));
    }
    os << '\n';
  }
}

void write_field_file(const std::string& path, const LoadedField& f) {
  std::ofstream os(path);
  if (!os) fail("parse-error", "cannot open for writing: " + path);
  std::visit([&](const auto& v) { write_field(os, v); }, f);
}

namespace {

double parse_grid_value(const std::string& tok) {
  if (tok == "nan" || tok == "-nan" || tok == "NaN") return std::numeric_limits<double>::quiet_NaN();
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail("parse-error", "bad grid value '" + tok + "'");
  }
}

}  // namespace

LoadedField read_field(std::istream& is) {
  std::string header, kind;
  is >> header >> kind;
  if (header != "FIELD") fail("parse-error", "missing FIELD header");
  if (kind == "poly") {
    Poly2 p;
    std::string line;
    std::getline(is, line);  // rest of the header line
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      int a, b;
      std::string coeff;
      if (!(ls >> a)) continue;  // blank line
      if (!(ls >> b >> coeff)) fail("parse-error", "bad poly line: " + line);
      p.set(a, b, p.coeff(a, b) + parse_rational(coeff));
    }
    return p;
  }
  if (kind == "expr") {
    std::string line;
    std::getline(is, line);
    if (!std::getline(is, line) || line.empty()) fail("parse-error", "missing expression line");
    return FieldExpr::parse_prefix(line);
  }
  if (kind == "grid") {
    std::string tag;
    int nx, ny;
    double x0, y0, hx, hy;
    if (!(is >> tag >> nx >> ny >> x0 >> y0 >> hx >> hy) || tag != "GRID2D")
      fail("parse-error", "bad GRID2D header");
    if (nx < 2 || ny < 2 || hx <= 0 || hy <= 0) fail("parse-error", "bad grid dimensions");
    GridField g(nx, ny, {x0, y0}, hx, hy);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::string tok;
        if (!(is >> tok)) fail("parse-error", "grid value list is short");
        g.value(i, j) = parse_grid_value(tok);
      }
    g.classify_from_values();
    return g;
  }
  fail("parse-error", "unknown field kind '" + kind + "'");
}

LoadedField read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("parse-error", "cannot open field file: " + path);
  return read_field(is);
}

}  // namespace morse2d
