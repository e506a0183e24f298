#pragma once

#include <string>
#include <string_view>

namespace morse2d {

/// Univariate profiles usable inside field expressions. Each carries
/// derivative rules up to order 6.
enum class Profile { bessel_j0, cosine, sine, exponential, sqrt_t };

double profile_eval(Profile p, double t);

/// out[k] = d^k f / dt^k (t) for k = 0..order (order <= 6).
void profile_derivatives(Profile p, double t, int order, double* out);

std::string profile_name(Profile p);
Profile profile_from_name(std::string_view name);

/// First positive zero of J1 (bisection on std::cyl_bessel_j).
double bessel_j1_first_zero();
/// First positive zero of J0.
double bessel_j0_first_zero();

}  // namespace morse2d
