#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "morse2d/profile.hpp"

namespace morse2d {

/// Univariate nonlinearity f(u) with derivative rules up to order 6.
/// Parsed from prefix text: "1", "u", "(exp u)", "(* 2 u)", "(+ u 1)", ...
class Nonlinearity {
public:
  Nonlinearity();  // f == 0

  static Nonlinearity parse(std::string_view text);
  static Nonlinearity constant(double c);
  static Nonlinearity identity();     // f(u) = u
  static Nonlinearity exponential();  // f(u) = e^u
  static Nonlinearity sum(std::vector<Nonlinearity> children);
  static Nonlinearity product(std::vector<Nonlinearity> children);
  static Nonlinearity scale(double k, Nonlinearity f);
  static Nonlinearity power(Nonlinearity f, int k);
  static Nonlinearity compose(Profile p, Nonlinearity f);

  double value(double u) const;
  /// out[k] = f^(k)(u), k = 0..order (order <= 6).
  void derivatives(double u, int order, double* out) const;
  double derivative(double u, int k = 1) const;

  /// Metadata flag: f(0) >= 0.
  bool f0_nonnegative() const { return value(0.0) >= 0.0; }

  std::string to_string() const;

private:
  struct Node;
  explicit Nonlinearity(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace morse2d
