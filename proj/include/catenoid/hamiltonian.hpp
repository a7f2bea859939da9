#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "catenoid/geometry.hpp"
#include "catenoid/params.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

// Common metric factor eta(z) = sech^2(z/R) / (2 m R^2).
inline double eta_factor(double z, const SystemParams& params) {
    const double s = sech(z / params.R);
    return s * s / (2.0 * params.mass * params.R * params.R);
}

// Classical Hamiltonian of a particle constrained to the catenoid:
//   H = sech^2(z/R)/(2 m R^2) * (p_theta^2 + R^2 p_z^2).
inline double classical_hamiltonian(const PhasePoint& p, const SystemParams& params) {
    const double P2 = p.p_theta * p.p_theta + params.R * params.R * p.p_z * p.p_z;
    return eta_factor(p.z, params) * P2;
}

// Which second-order quantum-corrected Hamiltonian to use.
//   Generated   — Taylor expansion of H in central moments, built by the
//                 engine; normative for the library.
//   Transcribed — the hand-entered legacy expression, kept verbatim; the
//                 default for --reproduce-paper runs.  It differs from
//                 Generated in two places: p_theta^2 (instead of p_theta)
//                 multiplying G^{0,1,1,0}, and a factor 2 on the pure
//                 second-derivative terms.
enum class HqSource { Generated, Transcribed };

inline HqSource hq_source_from_string(const std::string& s) {
    if (s == "generated") return HqSource::Generated;
    if (s == "transcribed") return HqSource::Transcribed;
    throw std::invalid_argument("unknown Hamiltonian source: " + s);
}

inline std::string to_string(HqSource source) {
    return source == HqSource::Generated ? "generated" : "transcribed";
}

namespace detail {

struct HqCoefficients {
    double kappa;   // weight of the pure second-derivative terms
    double x_theta; // the p_theta power multiplying G^{0,1,1,0}
};

inline HqCoefficients hq_coefficients(const PhasePoint& p, HqSource source) {
    if (source == HqSource::Generated) return {1.0, p.p_theta};
    return {2.0, p.p_theta * p.p_theta};
}

} // namespace detail

// Moment-dependent part of H_Q evaluated at position z with the given
// momenta and moments:
//   V(z) = eta(z) [ -(4 t / R) X G^{0,1,1,0} - 4 R t p_z G^{0,0,1,1}
//                   + kappa G^{0,2,0,0} + kappa R^2 G^{0,0,0,2}
//                   + (kappa/R^2)(2 - 3 sech^2)(p_theta^2 + R^2 p_z^2) G^{0,0,2,0} ],
// with t = tanh(z/R); X = p_theta, kappa = 1 for Generated and X = p_theta^2,
// kappa = 2 for Transcribed.
inline double effective_potential(double z, const MomentState& state, const SystemParams& params,
                                  HqSource source) {
    const double R = params.R;
    const double t = std::tanh(z / R);
    const double s = sech(z / R);
    const double eta = eta_factor(z, params);
    const PhasePoint& p = state.point;
    const auto [kappa, x_theta] = detail::hq_coefficients(p, source);
    const double P2 = p.p_theta * p.p_theta + R * R * p.p_z * p.p_z;
    const double A = 2.0 - 3.0 * s * s;
    return eta * (-(4.0 * t / R) * x_theta * state.g[3] - 4.0 * R * t * p.p_z * state.g[5] +
                  kappa * state.g[7] + kappa * R * R * state.g[9] +
                  (kappa / (R * R)) * A * P2 * state.g[8]);
}

// Second-order quantum-corrected Hamiltonian H_Q = H + moment corrections.
inline double effective_hamiltonian(const MomentState& state, const SystemParams& params,
                                    HqSource source) {
    return classical_hamiltonian(state.point, params) +
           effective_potential(state.point.z, state, params, source);
}

// The potential read off H_Q with the moments frozen at their initial values:
// only the even, momentum-diagonal terms survive (initial mixed moments are
// zero), evaluated with the current momenta.
inline double classical_potential(double z, const MomentState& initial_state,
                                  const SystemParams& params, HqSource source) {
    const double R = params.R;
    const double s = sech(z / R);
    const double eta = eta_factor(z, params);
    const PhasePoint& p = initial_state.point;
    const double kappa = detail::hq_coefficients(p, source).kappa;
    const double P2 = p.p_theta * p.p_theta + R * R * p.p_z * p.p_z;
    const double A = 2.0 - 3.0 * s * s;
    return eta * (kappa * initial_state.g[7] + kappa * R * R * initial_state.g[9] +
                  (kappa / (R * R)) * A * P2 * initial_state.g[8]);
}

// Minimum |p_z| with which a classical particle launched from z0 reaches the
// throat: conservation of H and p_theta gives a* = (|p_theta|/R) sinh(|z0|/R).
inline double classical_transmission_threshold(double z0, double p_theta,
                                               const SystemParams& params) {
    if (p_theta == 0.0 || z0 == 0.0) return 0.0;
    return std::abs(p_theta) / params.R * std::sinh(std::abs(z0) / params.R);
}

} // namespace catenoid
