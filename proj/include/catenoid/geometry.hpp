#pragma once

#include <cmath>

#include "catenoid/params.hpp"

namespace catenoid {

// Overflow-safe sech: 2 e^{-|x|} / (1 + e^{-2|x|}) underflows gracefully to 0
// for large |x| instead of dividing by an overflowing cosh.
inline double sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

// Gaussian curvature of the catenoid with waist radius R:
//   K(z) = -(1/R^2) sech^4(z/R).
inline double gaussian_curvature(double z, const SystemParams& params) {
    const double s = sech(z / params.R);
    const double s2 = s * s;
    return -s2 * s2 / (params.R * params.R);
}

// The catenoid is a minimal surface: mean curvature is identically zero.
inline double mean_curvature() { return 0.0; }

// Geometric (da Costa) potential induced by the constraint:
//   V_G(z) = -hbar^2/(2 m R^2) sech^4(z/R) = hbar^2/(2m) K(z).
inline double geometric_potential(double z, const SystemParams& params) {
    return params.hbar * params.hbar / (2.0 * params.mass) * gaussian_curvature(z, params);
}

} // namespace catenoid
