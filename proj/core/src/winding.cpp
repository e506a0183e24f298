#include "morse2d/winding.hpp"

#include <cmath>
#include <optional>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2 * M_PI;
  while (a <= -M_PI) a += 2 * M_PI;
  return a;
}

struct CircleAttempt {
  bool certified = false;
  bool gradient_vanished = false;
  int value = 0;
  int samples = 0;
  double min_grad = 0;
};

CircleAttempt try_circle(const ScalarField& u, Vec2 p, double r, int m, double vanish_tol) {
  CircleAttempt a;
  a.samples = m;
  std::vector<double> ang(static_cast<size_t>(m), 0.0);
  a.min_grad = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const double t = 2 * M_PI * k / m;
    const Vec2 q{p.x + r * std::cos(t), p.y + r * std::sin(t)};
    const Vec2 g = u.gradient(q);
    const double gn = g.norm();
    a.min_grad = std::min(a.min_grad, gn);
    if (gn < vanish_tol) {
      a.gradient_vanished = true;
      return a;
    }
    ang[size_t(k)] = std::atan2(g.y, g.x);
  }
  double total = 0;
  bool ok = true;
  for (int k = 0; k < m; ++k) {
    const double d = wrap_pi(ang[size_t((k + 1) % m)] - ang[size_t(k)]);
    if (std::abs(d) >= M_PI / 2) ok = false;
    total += d;
  }
  a.certified = ok;
  a.value = int(std::lround(total / (2 * M_PI)));
  return a;
}

double field_scale_on_circle(const ScalarField& u, Vec2 p, double r) {
  double s = 0;
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * M_PI * k / 16;
    s = std::max(s, std::abs(u.value({p.x + r * std::cos(t), p.y + r * std::sin(t)})));
  }
  return std::max(s, 1e-30);
}

}  // namespace

IndexResult gradient_index(const ScalarField& u, Vec2 p, double r, int m, int sample_cap) {
  if (r <= 0) fail("gradient-vanishes-on-circle", "radius must be positive");
  const double vanish_tol = 1e-12 * field_scale_on_circle(u, p, r) / r;
  CircleAttempt a;
  for (int mm = m; mm <= sample_cap; mm *= 2) {
    a = try_circle(u, p, r, mm, vanish_tol);
    if (a.gradient_vanished)
      fail("gradient-vanishes-on-circle",
           "gradient below tolerance on the sampled circle; choose another radius");
    if (a.certified) return {a.value, r, a.samples, a.min_grad, true};
  }
  fail("not-certified", "angular increments still reach pi/2 at the sample cap");
}

IndexResult robust_index(const ScalarField& u, Vec2 p) {
  const double r_max = 0.5 * u.domain().distance_to_boundary(p);
  if (!(r_max > 0)) fail("non-isolated-suspected", "no room for any test circle");
  constexpr int kLadder = 20;

  std::vector<std::optional<IndexResult>> results(kLadder + 1);
  int run = 0;  // consecutive certified-equal results ending at the previous k
  for (int k = 0; k <= kLadder; ++k) {
    const double r = r_max * std::pow(0.5, k);
    try {
      results[size_t(k)] = gradient_index(u, p, r, 64);
    } catch (const Error&) {
      results[size_t(k)] = std::nullopt;
    }
    const bool extends = k > 0 && results[size_t(k)] && results[size_t(k - 1)] &&
                         results[size_t(k)]->value == results[size_t(k - 1)]->value;
    run = results[size_t(k)] ? (extends ? run + 1 : 1) : 0;
    // Once three consecutive ladder radii agree and the next one fails to
    // certify, smaller radii only get harder; stop scanning downward.
    if (run == 0 && k >= 3 && results[size_t(k - 1)] && results[size_t(k - 2)] &&
        results[size_t(k - 3)] &&
        results[size_t(k - 1)]->value == results[size_t(k - 2)]->value &&
        results[size_t(k - 2)]->value == results[size_t(k - 3)]->value)
      break;
  }

  // smallest radius (largest k) certified with both ladder neighbors equal
  for (int k = kLadder - 1; k >= 1; --k) {
    if (results[size_t(k)] && results[size_t(k - 1)] && results[size_t(k + 1)] &&
        results[size_t(k)]->value == results[size_t(k - 1)]->value &&
        results[size_t(k)]->value == results[size_t(k + 1)]->value)
      return *results[size_t(k)];
  }
  fail("non-isolated-suspected",
       "no radius certified with stable neighbors; gradient zeros may accumulate at the point");
}

int boundary_degree(const ScalarField& u, const std::vector<Vec2>& loop) {
  if (loop.size() < 3) fail("gradient-vanishes-on-curve", "degenerate curve");
  size_t n = loop.size();
  if (loop.front().x == loop.back().x && loop.front().y == loop.back().y) --n;
  double scale = 0;
  for (size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(u.value(loop[k])));
  const double tol = 1e-12 * std::max(scale, 1e-30);

  double prev = 0, total = 0;
  for (size_t k = 0; k <= n; ++k) {
    const Vec2 g = u.gradient(loop[k % n]);
    if (g.norm() < tol) fail("gradient-vanishes-on-curve", "gradient vanishes on the curve");
    const double a = std::atan2(g.y, g.x);
    if (k > 0) total += wrap_pi(a - prev);
    prev = a;
  }
  return int(std::lround(total / (2 * M_PI)));
}

}  // namespace morse2d
