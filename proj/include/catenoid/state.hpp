#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "catenoid/moment_index.hpp"
#include "catenoid/params.hpp"

namespace catenoid {

// Wraps an angle to [-pi, pi).
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * M_PI);
    if (r >= M_PI) r -= 2.0 * M_PI;
    return r;
}

// Classical phase-space point; theta is stored wrapped to [-pi, pi).
struct PhasePoint {
    double theta = 0.0;
    double p_theta = 0.0;
    double z = 0.0;
    double p_z = 0.0;

    PhasePoint() = default;
    PhasePoint(double theta_, double p_theta_, double z_, double p_z_)
        : theta(wrap_angle(theta_)), p_theta(p_theta_), z(z_), p_z(p_z_) {}
};

// The 14-dimensional semiclassical phase point: classical pair plus the ten
// second-order central moments in the fixed order
//   G^{1,1,0,0}, G^{1,0,1,0}, G^{1,0,0,1}, G^{0,1,1,0}, G^{0,1,0,1},
//   G^{0,0,1,1}, G^{2,0,0,0}, G^{0,2,0,0}, G^{0,0,2,0}, G^{0,0,0,2}.
struct MomentState {
    PhasePoint point;
    std::array<double, 10> g{};

    static const std::array<MomentIndex, 10>& moment_layout() {
        static const std::array<MomentIndex, 10> layout{
            MomentIndex(1, 1, 0, 0), MomentIndex(1, 0, 1, 0), MomentIndex(1, 0, 0, 1),
            MomentIndex(0, 1, 1, 0), MomentIndex(0, 1, 0, 1), MomentIndex(0, 0, 1, 1),
            MomentIndex(2, 0, 0, 0), MomentIndex(0, 2, 0, 0), MomentIndex(0, 0, 2, 0),
            MomentIndex(0, 0, 0, 2)};
        return layout;
    }

    static int moment_position(const MomentIndex& idx) {
        const auto& layout = moment_layout();
        for (int i = 0; i < 10; ++i) {
            if (layout[static_cast<std::size_t>(i)] == idx) return i;
        }
        return -1;
    }

    // Value of an arbitrary moment index on this truncated state: order 0 is
    // the constant 1, order 1 vanishes, order 2 is stored, higher orders are
    // outside the truncation and an error to request.
    double moment(const MomentIndex& idx) const {
        const int ord = idx.order();
        if (ord == 0) return 1.0;
        if (ord == 1) return 0.0;
        if (ord == 2) return g[static_cast<std::size_t>(moment_position(idx))];
        throw std::domain_error("moment of order > 2 requested from a second-order state");
    }

    double uncertainty_theta() const { return g[6] * g[7] - g[0] * g[0]; }
    double uncertainty_z() const { return g[8] * g[9] - g[5] * g[5]; }

    // Monitor checks (not construction invariants: they are what dynamics is
    // expected to preserve and what the verify command reports on).
    bool pure_squares_nonnegative() const { return g[6] >= 0 && g[7] >= 0 && g[8] >= 0 && g[9] >= 0; }
    bool floors_ok(const SystemParams& params, double tol = 1e-6) const {
        const double floor = params.hbar * params.hbar / 4.0 * (1.0 - tol);
        return uncertainty_theta() >= floor && uncertainty_z() >= floor;
    }

    // Flat layout used by the integrator: (theta, p_theta, z, p_z, g0..g9).
    // theta is kept unwound inside the integrator; wrapping happens in the
    // PhasePoint constructor on the way back.
    std::array<double, 14> to_array(double theta_unwound) const {
        std::array<double, 14> y{};
        y[0] = theta_unwound;
        y[1] = point.p_theta;
        y[2] = point.z;
        y[3] = point.p_z;
        for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(4 + i)] = g[static_cast<std::size_t>(i)];
        return y;
    }

    static MomentState from_array(const std::array<double, 14>& y) {
        MomentState s;
        s.point = PhasePoint(y[0], y[1], y[2], y[3]);
        for (int i = 0; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(4 + i)];
        return s;
    }
};

} // namespace catenoid
