#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "morse2d/expr.hpp"
#include "morse2d/grid.hpp"
#include "morse2d/poly2.hpp"

namespace morse2d {

/// Text formats:
///   FIELD poly            one coefficient per line: "a b num/den"
///   FIELD expr            one prefix-notation expression line
///   FIELD grid            "GRID2D nx ny x0 y0 hx hy" then nx*ny values,
///                         row-major (y rows), 17 significant digits,
///                         "nan" at exterior nodes.
using LoadedField = std::variant<Poly2, FieldExpr, GridField>;

void write_field(std::ostream& os, const Poly2& p);
void write_field(std::ostream& os, const FieldExpr& e);
void write_field(std::ostream& os, const GridField& g);
void write_field_file(const std::string& path, const LoadedField& f);

LoadedField read_field(std::istream& is);
LoadedField read_field_file(const std::string& path);

std::string format17(double v);

}  // namespace morse2d
