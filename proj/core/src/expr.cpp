#include "morse2d/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "morse2d/errors.hpp"

namespace morse2d {

enum class NodeKind { constant, coordinate, sum, product, scale, power, radial, along };

struct FieldExpr::Node {
  NodeKind kind;
  double a = 0, b = 0;  // constant / scale factor / center (a,b) / shift a
  int axis = 0;
  int exponent = 0;
  Profile profile = Profile::cosine;
  std::vector<FieldExpr> children;
};

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

FieldExpr FieldExpr::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->a = c;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::coordinate(int axis) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::coordinate;
  n->axis = axis;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::sum(std::vector<FieldExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::sum;
  n->children = std::move(children);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::product(std::vector<FieldExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::product;
  n->children = std::move(children);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::scale(double k, FieldExpr e) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::scale;
  n->a = k;
  n->children.push_back(std::move(e));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::pow(FieldExpr e, int k) {
  if (k < 0) fail("parse-error", "negative power in field expression");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::power;
  n->exponent = k;
  n->children.push_back(std::move(e));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::radial(Profile p, double cx, double cy) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::radial;
  n->profile = p;
  n->a = cx;
  n->b = cy;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::along_coordinate(Profile p, int axis, double shift) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::along;
  n->profile = p;
  n->axis = axis;
  n->a = shift;
  return FieldExpr(std::move(n));
}

double FieldExpr::value(Vec2 p) const {
  if (!node_) fail("parse-error", "empty field expression");
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::constant: return n.a;
    case NodeKind::coordinate: return n.axis == 0 ? p.x : p.y;
    case NodeKind::sum: {
      double s = 0;
      for (const auto& c : n.children) s += c.value(p);
      return s;
    }
    case NodeKind::product: {
      double s = 1;
      for (const auto& c : n.children) s *= c.value(p);
      return s;
    }
    case NodeKind::scale: return n.a * n.children[0].value(p);
    case NodeKind::power: {
      const double v = n.children[0].value(p);
      double r = 1;
      for (int i = 0; i < n.exponent; ++i) r *= v;
      return r;
    }
    case NodeKind::radial: {
      const double r = std::hypot(p.x - n.a, p.y - n.b);
      return profile_eval(n.profile, r);
    }
    case NodeKind::along: {
      const double t = (n.axis == 0 ? p.x : p.y) - n.a;
      return profile_eval(n.profile, t);
    }
  }
  fail("parse-error", "corrupt expression node");
}

Series2 FieldExpr::taylor(Vec2 p, int order) const {
  if (!node_) fail("parse-error", "empty field expression");
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::constant: return Series2::constant(order, n.a);
    case NodeKind::coordinate: return Series2::variable(order, n.axis, n.axis == 0 ? p.x : p.y);
    case NodeKind::sum: {
      Series2 s(order);
      for (const auto& c : n.children) s = s + c.taylor(p, order);
      return s;
    }
    case NodeKind::product: {
      Series2 s = Series2::constant(order, 1.0);
      for (const auto& c : n.children) s = s * c.taylor(p, order);
      return s;
    }
    case NodeKind::scale: return n.children[0].taylor(p, order).scaled(n.a);
    case NodeKind::power: return n.children[0].taylor(p, order).pow(n.exponent);
    case NodeKind::radial: {
      const Series2 dx = Series2::variable(order, 0, p.x - n.a);
      const Series2 dy = Series2::variable(order, 1, p.y - n.b);
      const Series2 s2 = dx * dx + dy * dy;
      if (s2.value() <= 0.0)
        fail("point-outside-domain", "radial profile expanded at its center");
      double sq[Series2::kMaxOrder + 1];
      profile_derivatives(Profile::sqrt_t, s2.value(), order, sq);
      const Series2 r = s2.compose(std::span<const double>(sq, size_t(order) + 1));
      double pd[Series2::kMaxOrder + 1];
      profile_derivatives(n.profile, r.value(), order, pd);
      return r.compose(std::span<const double>(pd, size_t(order) + 1));
    }
    case NodeKind::along: {
      const Series2 t =
          Series2::variable(order, n.axis, (n.axis == 0 ? p.x : p.y) - n.a);
      double pd[Series2::kMaxOrder + 1];
      profile_derivatives(n.profile, t.value(), order, pd);
      return t.compose(std::span<const double>(pd, size_t(order) + 1));
    }
  }
  fail("parse-error", "corrupt expression node");
}

Vec2 FieldExpr::gradient(Vec2 p) const {
  const Series2 s = taylor(p, 1);
  return {s.at(1, 0), s.at(0, 1)};
}

std::string FieldExpr::to_prefix() const {
  if (!node_) return "";
  const Node& n = *node_;
  std::ostringstream os;
  switch (n.kind) {
    case NodeKind::constant: os << fmt17(n.a); break;
    case NodeKind::coordinate: os << (n.axis == 0 ? "x" : "y"); break;
    case NodeKind::sum:
    case NodeKind::product: {
      os << (n.kind == NodeKind::sum ? "(+" : "(*");
      for (const auto& c : n.children) os << ' ' << c.to_prefix();
      os << ')';
      break;
    }
    case NodeKind::scale:
      os << "(scale " << fmt17(n.a) << ' ' << n.children[0].to_prefix() << ')';
      break;
    case NodeKind::power:
      os << "(pow " << n.children[0].to_prefix() << ' ' << n.exponent << ')';
      break;
    case NodeKind::radial:
      os << "(radial " << profile_name(n.profile) << ' ' << fmt17(n.a) << ' ' << fmt17(n.b) << ')';
      break;
    case NodeKind::along:
      os << "(uni " << profile_name(n.profile) << ' ' << (n.axis == 0 ? "x" : "y") << ' '
         << fmt17(n.a) << ')';
      break;
  }
  return os.str();
}

namespace {

struct Tokenizer {
  std::string_view text;
  size_t pos = 0;

  std::string next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) return "";
    const char c = text[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return std::string(text.substr(start, pos - start));
  }
  std::string peek() {
    const size_t save = pos;
    std::string t = next();
    pos = save;
    return t;
  }
};

double parse_number(const std::string& t) {
  // allow exact rationals "p/q" in expression text as well
  const auto slash = t.find('/');
  try {
    size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(t.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(t);
      const double den = std::stod(t.substr(slash + 1), &used);
      if (used != t.size() - slash - 1) throw std::invalid_argument(t);
      return num / den;
    }
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    fail("parse-error", "expected a number, got '" + t + "'");
  }
}

int parse_axis(const std::string& t) {
  if (t == "x") return 0;
  if (t == "y") return 1;
  fail("parse-error", "expected coordinate x or y, got '" + t + "'");
}

FieldExpr parse_expr(Tokenizer& tk) {
  const std::string t = tk.next();
  if (t.empty()) fail("parse-error", "unexpected end of expression");
  if (t == ")") fail("parse-error", "unexpected ')'");
  if (t == "(") {
    const std::string op = tk.next();
    if (op == "+" || op == "*") {
      std::vector<FieldExpr> kids;
      while (tk.peek() != ")") {
        if (tk.peek().empty()) fail("parse-error", "missing ')'");
        kids.push_back(parse_expr(tk));
      }
      tk.next();  // ')'
      if (kids.empty()) fail("parse-error", "empty operator list");
      return op == "+" ? FieldExpr::sum(std::move(kids)) : FieldExpr::product(std::move(kids));
    }
    if (op == "scale") {
      const double k = parse_number(tk.next());
      FieldExpr e = parse_expr(tk);
      if (tk.next() != ")") fail("parse-error", "missing ')' after scale");
      return FieldExpr::scale(k, std::move(e));
    }
    if (op == "pow") {
      FieldExpr e = parse_expr(tk);
      const double k = parse_number(tk.next());
      if (k < 0 || k != std::floor(k)) fail("parse-error", "pow exponent must be a nonnegative integer");
      if (tk.next() != ")") fail("parse-error", "missing ')' after pow");
      return FieldExpr::pow(std::move(e), int(k));
    }
    if (op == "radial") {
      const Profile p = profile_from_name(tk.next());
      const double cx = parse_number(tk.next());
      const double cy = parse_number(tk.next());
      if (tk.next() != ")") fail("parse-error", "missing ')' after radial");
      return FieldExpr::radial(p, cx, cy);
    }
    if (op == "uni") {
      const Profile p = profile_from_name(tk.next());
      const int axis = parse_axis(tk.next());
      double shift = 0.0;
      std::string nxt = tk.next();
      if (nxt != ")") {
        shift = parse_number(nxt);
        nxt = tk.next();
      }
      if (nxt != ")") fail("parse-error", "missing ')' after uni");
      return FieldExpr::along_coordinate(p, axis, shift);
    }
    fail("parse-error", "unknown operator '" + op + "'");
  }
  if (t == "x" || t == "y") return FieldExpr::coordinate(parse_axis(t));
  return FieldExpr::constant(parse_number(t));
}

}  // namespace

FieldExpr FieldExpr::parse_prefix(std::string_view text) {
  Tokenizer tk{text};
  FieldExpr e = parse_expr(tk);
  if (!tk.next().empty()) fail("parse-error", "trailing tokens in expression");
  return e;
}

}  // namespace morse2d
