#include "morse2d/nonlinearity.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

constexpr int kOrd = 6;

/// Truncated univariate Taylor series of order 6 in du about a base value.
struct Series1 {
  std::array<double, kOrd + 1> c{};

  static Series1 constant(double v) {
    Series1 s;
    s.c[0] = v;
    return s;
  }
  static Series1 variable(double v) {
    Series1 s;
    s.c[0] = v;
    s.c[1] = 1.0;
    return s;
  }
  Series1 operator+(const Series1& o) const {
    Series1 r = *this;
    for (int i = 0; i <= kOrd; ++i) r.c[size_t(i)] += o.c[size_t(i)];
    return r;
  }
  Series1 operator*(const Series1& o) const {
    Series1 r;
    for (int i = 0; i <= kOrd; ++i)
      for (int j = 0; i + j <= kOrd; ++j) r.c[size_t(i + j)] += c[size_t(i)] * o.c[size_t(j)];
    return r;
  }
  Series1 scaled(double k) const {
    Series1 r = *this;
    for (double& v : r.c) v *= k;
    return r;
  }
  Series1 pow(int k) const {
    Series1 r = Series1::constant(1.0);
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
  }
  Series1 compose(const double* g) const {
    Series1 delta = *this;
    delta.c[0] = 0.0;
    double fact = 1.0;
    std::array<double, kOrd + 1> coef{};
    for (int k = 0; k <= kOrd; ++k) {
      coef[size_t(k)] = g[k] / fact;
      fact *= double(k + 1);
    }
    Series1 r = Series1::constant(coef[kOrd]);
    for (int k = kOrd - 1; k >= 0; --k) {
      r = r * delta;
      r.c[0] += coef[size_t(k)];
    }
    return r;
  }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class FnKind { constant, variable, sum, product, scale, power, profile };

}  // namespace

struct Nonlinearity::Node {
  FnKind kind = FnKind::constant;
  double a = 0;
  int exponent = 0;
  Profile profile = Profile::exponential;
  std::vector<Nonlinearity> children;

  Series1 eval(double u) const {
    switch (kind) {
      case FnKind::constant: return Series1::constant(a);
      case FnKind::variable: return Series1::variable(u);
      case FnKind::sum: {
        Series1 s{};
        for (const auto& c : children) s = s + c.node_->eval(u);
        return s;
      }
      case FnKind::product: {
        Series1 s = Series1::constant(1.0);
        for (const auto& c : children) s = s * c.node_->eval(u);
        return s;
      }
      case FnKind::scale: return children[0].node_->eval(u).scaled(a);
      case FnKind::power: return children[0].node_->eval(u).pow(exponent);
      case FnKind::profile: {
        const Series1 t = children[0].node_->eval(u);
        double pd[kOrd + 1];
        profile_derivatives(profile, t.c[0], kOrd, pd);
        return t.compose(pd);
      }
    }
    fail("parse-error", "corrupt nonlinearity node");
  }

  void print(std::ostringstream& os) const {
    switch (kind) {
      case FnKind::constant: os << fmt17(a); return;
      case FnKind::variable: os << "u"; return;
      case FnKind::sum:
      case FnKind::product: {
        os << (kind == FnKind::sum ? "(+" : "(*");
        for (const auto& c : children) {
          os << ' ';
          c.node_->print(os);
        }
        os << ')';
        return;
      }
      case FnKind::scale: {
        os << "(scale " << fmt17(a) << ' ';
        children[0].node_->print(os);
        os << ')';
        return;
      }
      case FnKind::power: {
        os << "(pow ";
        children[0].node_->print(os);
        os << ' ' << exponent << ')';
        return;
      }
      case FnKind::profile: {
        os << '(' << profile_name(profile) << ' ';
        children[0].node_->print(os);
        os << ')';
        return;
      }
    }
  }
};

Nonlinearity::Nonlinearity() { *this = constant(0.0); }

Nonlinearity Nonlinearity::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::constant;
  n->a = c;
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::identity() {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::variable;
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::exponential() { return compose(Profile::exponential, identity()); }

Nonlinearity Nonlinearity::sum(std::vector<Nonlinearity> children) {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::sum;
  n->children = std::move(children);
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::product(std::vector<Nonlinearity> children) {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::product;
  n->children = std::move(children);
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::scale(double k, Nonlinearity f) {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::scale;
  n->a = k;
  n->children.push_back(std::move(f));
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::power(Nonlinearity f, int k) {
  if (k < 0) fail("parse-error", "negative power in nonlinearity");
  auto n = std::make_shared<Node>();
  n->kind = FnKind::power;
  n->exponent = k;
  n->children.push_back(std::move(f));
  return Nonlinearity(std::move(n));
}

Nonlinearity Nonlinearity::compose(Profile p, Nonlinearity f) {
  auto n = std::make_shared<Node>();
  n->kind = FnKind::profile;
  n->profile = p;
  n->children.push_back(std::move(f));
  return Nonlinearity(std::move(n));
}

namespace {

struct FnTok {
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
    size_t save = pos;
    std::string t = next();
    pos = save;
    return t;
  }
};

double fn_number(const std::string& t) {
  try {
    size_t used = 0;
    const auto slash = t.find('/');
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
    fail("parse-error", "expected a number in nonlinearity, got '" + t + "'");
  }
}

Nonlinearity parse_fn(FnTok& tk) {
  const std::string t = tk.next();
  if (t.empty()) fail("parse-error", "unexpected end of nonlinearity");
  if (t == ")") fail("parse-error", "unexpected ')'");
  if (t == "(") {
    const std::string op = tk.next();
    if (op == "+" || op == "*") {
      std::vector<Nonlinearity> kids;
      while (tk.peek() != ")") {
        if (tk.peek().empty()) fail("parse-error", "missing ')'");
        kids.push_back(parse_fn(tk));
      }
      tk.next();
      if (kids.empty()) fail("parse-error", "empty operator list");
      return op == "+" ? Nonlinearity::sum(std::move(kids))
                       : Nonlinearity::product(std::move(kids));
    }
    if (op == "scale") {
      const double k = fn_number(tk.next());
      Nonlinearity f = parse_fn(tk);
      if (tk.next() != ")") fail("parse-error", "missing ')' after scale");
      return Nonlinearity::scale(k, std::move(f));
    }
    if (op == "pow") {
      Nonlinearity f = parse_fn(tk);
      const double k = fn_number(tk.next());
      if (k < 0 || k != std::floor(k))
        fail("parse-error", "pow exponent must be a nonnegative integer");
      if (tk.next() != ")") fail("parse-error", "missing ')' after pow");
      return Nonlinearity::power(std::move(f), int(k));
    }
    if (op == "exp" || op == "cos" || op == "sin") {
      Nonlinearity f = parse_fn(tk);
      if (tk.next() != ")") fail("parse-error", "missing ')' after " + op);
      return Nonlinearity::compose(profile_from_name(op), std::move(f));
    }
    fail("parse-error", "unknown nonlinearity operator '" + op + "'");
  }
  if (t == "u") return Nonlinearity::identity();
  return Nonlinearity::constant(fn_number(t));
}

}  // namespace

Nonlinearity Nonlinearity::parse(std::string_view text) {
  FnTok tk{text};
  Nonlinearity f = parse_fn(tk);
  if (!tk.next().empty()) fail("parse-error", "trailing tokens in nonlinearity");
  return f;
}

double Nonlinearity::value(double u) const { return node_->eval(u).c[0]; }

void Nonlinearity::derivatives(double u, int order, double* out) const {
  const Series1 s = node_->eval(u);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    out[k] = s.c[size_t(k)] * fact;
    fact *= double(k + 1);
  }
}

double Nonlinearity::derivative(double u, int k) const {
  double d[kOrd + 1];
  derivatives(u, kOrd, d);
  return d[k];
}

std::string Nonlinearity::to_string() const {
  std::ostringstream os;
  node_->print(os);
  return os.str();
}

}  // namespace morse2d
