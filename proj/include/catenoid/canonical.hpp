#pragma once

#include <array>
#include <cmath>

#include "catenoid/geometry.hpp"
#include "catenoid/params.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

// Canonical pairs produced by the generating function
// F2 = R sinh(z/R) P1 + theta cosh(z/R) P2.
struct CanonicalPoint {
    double Q1 = 0.0;
    double P1 = 0.0;
    double Q2 = 0.0;
    double P2 = 0.0;
};

// Scalar-generic form of the map so verification code can evaluate it in
// extended precision (finite-difference Jacobians need the extra mantissa).
template <typename T>
std::array<T, 4> canonical_map(T theta, T p_theta, T z, T p_z, T R) {
    const T u = z / R;
    const T sh = std::sinh(u);
    const T se = T(1) / std::cosh(u);
    return {R * sh,
            se * p_z - (theta / R) * sh * se * se * p_theta,
            theta * std::cosh(u),
            se * p_theta};
}

inline CanonicalPoint canonical_transform(const PhasePoint& p, const SystemParams& params) {
    const auto m = canonical_map<double>(p.theta, p.p_theta, p.z, p.p_z, params.R);
    return CanonicalPoint{m[0], m[1], m[2], m[3]};
}

// The transformed Hamiltonian: two kinetic terms plus a momentum-dependent
// constraining potential,
//   K = P1^2/2m + P2^2/(2 m R^2) + Q1 Q2 P1 P2 / (m (R^2 + Q1^2))
//     + Q1^2 Q2^2 P2^2 / (2 m (R^2 + Q1^2)^2).
inline double kamiltonian(const CanonicalPoint& c, const SystemParams& params) {
    const double m = params.mass;
    const double R2 = params.R * params.R;
    const double denom = R2 + c.Q1 * c.Q1;
    return c.P1 * c.P1 / (2.0 * m) + c.P2 * c.P2 / (2.0 * m * R2) +
           c.Q1 * c.Q2 * c.P1 * c.P2 / (m * denom) +
           c.Q1 * c.Q1 * c.Q2 * c.Q2 * c.P2 * c.P2 / (2.0 * m * denom * denom);
}

} // namespace catenoid
