#include "morse2d/profile.hpp"

#include <array>
#include <cmath>

#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

// Derivatives of J0 via J0' = -J1, J1' = J0 - J1/t. Each d^k J0 is kept as
// p(s) J0 + q(s) J1 with p,q polynomials in s = 1/t; differentiating maps
// (p, q) -> (p' + q, q' - q s - p) where (s^m)' = -m s^(m+1).
void bessel_j0_derivs(double t, int order, double* out) {
  constexpr int M = 10;
  std::array<double, M> p{}, q{};
  p[0] = 1.0;  // J0
  const double j0 = std::cyl_bessel_j(0, t);
  const double j1 = std::cyl_bessel_j(1, t);
  const double s = 1.0 / t;
  auto eval_ps = [&](const std::array<double, M>& c) {
    double v = 0.0, sp = 1.0;
    for (int m = 0; m < M; ++m) {
      v += c[m] * sp;
      sp *= s;
    }
    return v;
  };
  out[0] = j0;
  for (int k = 1; k <= order; ++k) {
    std::array<double, M> np{}, nq{};
    for (int m = 0; m < M; ++m) {
      // derivative of the s-polynomial parts
      if (m + 1 < M) {
        np[m + 1] += -double(m) * p[m];
        nq[m + 1] += -double(m) * q[m];
      }
      // p J0' = -p J1 ; q J1' = q J0 - q s J1
      nq[m] += -p[m];
      np[m] += q[m];
      if (m + 1 < M) nq[m + 1] += -q[m];
    }
    p = np;
    q = nq;
    out[k] = eval_ps(p) * j0 + eval_ps(q) * j1;
  }
}

double find_bessel_zero(int nu, double lo, double hi) {
  auto f = [&](double x) { return std::cyl_bessel_j(double(nu), x); };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double profile_eval(Profile p, double t) {
  switch (p) {
    case Profile::bessel_j0: return std::cyl_bessel_j(0, t);
    case Profile::cosine: return std::cos(t);
    case Profile::sine: return std::sin(t);
    case Profile::exponential: return std::exp(t);
    case Profile::sqrt_t: return std::sqrt(t);
  }
  fail("parse-error", "unknown profile");
}

void profile_derivatives(Profile p, double t, int order, double* out) {
  switch (p) {
    case Profile::bessel_j0: bessel_j0_derivs(t, order, out); return;
    case Profile::cosine: {
      const double c = std::cos(t), s = std::sin(t);
      const double cyc[4] = {c, -s, -c, s};
      for (int k = 0; k <= order; ++k) out[k] = cyc[k % 4];
      return;
    }
    case Profile::sine: {
      const double c = std::cos(t), s = std::sin(t);
      const double cyc[4] = {s, c, -s, -c};
      for (int k = 0; k <= order; ++k) out[k] = cyc[k % 4];
      return;
    }
    case Profile::exponential: {
      const double e = std::exp(t);
      for (int k = 0; k <= order; ++k) out[k] = e;
      return;
    }
    case Profile::sqrt_t: {
      // d^k/dt^k t^(1/2) = (1/2)(1/2-1)...(1/2-k+1) t^(1/2-k)
      if (t <= 0) fail("point-outside-domain", "sqrt profile at t <= 0");
      out[0] = std::sqrt(t);
      double prod = 1.0, tp = out[0];
      for (int k = 1; k <= order; ++k) {
        prod *= 0.5 - double(k - 1);
        tp /= t;
        out[k] = prod * tp;
      }
      return;
    }
  }
  fail("parse-error", "unknown profile");
}

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::bessel_j0: return "j0";
    case Profile::cosine: return "cos";
    case Profile::sine: return "sin";
    case Profile::exponential: return "exp";
    case Profile::sqrt_t: return "sqrt";
  }
  return "?";
}

Profile profile_from_name(std::string_view name) {
  if (name == "j0") return Profile::bessel_j0;
  if (name == "cos") return Profile::cosine;
  if (name == "sin") return Profile::sine;
  if (name == "exp") return Profile::exponential;
  if (name == "sqrt") return Profile::sqrt_t;
  fail("parse-error", "unknown profile name: " + std::string(name));
}

double bessel_j1_first_zero() {
  static const double z = find_bessel_zero(1, 3.0, 5.0);
  return z;
}

double bessel_j0_first_zero() {
  static const double z = find_bessel_zero(0, 2.0, 3.0);
  return z;
}

}  // namespace morse2d
