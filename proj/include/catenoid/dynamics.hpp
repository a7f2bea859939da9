#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catenoid/eom.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/ode.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

struct TrajectorySample {
    double t = 0.0;
    double theta_unwound = 0.0;
    MomentState state;
    double h_q = 0.0;      // effective Hamiltonian, matching the rhs source
    double u_theta = 0.0;  // G2000 G0200 - (G1100)^2
    double u_z = 0.0;      // G0020 G0002 - (G0011)^2
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    SystemParams params;
    HqSource source = HqSource::Generated;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    bool classical = false;
    double t_requested = 0.0;
    OdeStatus status = OdeStatus::Ok;
    std::string message;
    long n_accepted = 0;
    long n_rejected = 0;
    // First throat crossing (z = 0), located by dense-output root finding.
    std::optional<double> crossing_time;

    bool completed() const { return status == OdeStatus::Ok; }
    double t_reached() const { return samples.empty() ? 0.0 : samples.back().t; }
};

struct IntegrateOptions {
    int sample_stride = 1;        // record every n-th accepted step
    long max_steps = 2000000;
};

namespace detail {

struct CompiledRhsFunctor {
    const CompiledRhs* rhs;
    void operator()(double /*t*/, const std::array<double, 14>& y,
                    std::array<double, 14>& dydt) const {
        (*rhs)(y, dydt);
    }
};

inline TrajectorySample make_sample(double t, const std::array<double, 14>& y,
                                    const SystemParams& params, HqSource source) {
    TrajectorySample s;
    s.t = t;
    s.theta_unwound = y[0];
    s.state = MomentState::from_array(y);
    s.h_q = effective_hamiltonian(s.state, params, source);
    s.u_theta = s.state.uncertainty_theta();
    s.u_z = s.state.uncertainty_z();
    return s;
}

} // namespace detail

// Adaptive Runge-Kutta integration of the chosen right-hand side. Samples are
// recorded at accepted steps (first sample is the initial state; the final
// reached state is always recorded). On integrator failure the trajectory
// carries every sample up to the last good state plus the failure status.
inline Trajectory integrate(const MomentState& state0, const SystemParams& params, double T,
                            HqSource source, double abs_tol = 1e-10, double rel_tol = 1e-10,
                            const IntegrateOptions& options = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("integration horizon must be positive");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw std::invalid_argument("tolerances must be positive");
    }
    params.validate();

    Trajectory traj;
    traj.params = params;
    traj.source = source;
    traj.abs_tol = abs_tol;
    traj.rel_tol = rel_tol;
    traj.t_requested = T;

    const CompiledRhs rhs = compile_rhs(source, params);
    detail::CompiledRhsFunctor f{&rhs};
    Dopri5<14, detail::CompiledRhsFunctor> solver(f, abs_tol, rel_tol);
    solver.max_steps = options.max_steps;

    std::array<double, 14> y0 = state0.to_array(state0.point.theta);
    traj.samples.push_back(detail::make_sample(0.0, y0, params, source));

    double prev_z = y0[2];
    long accepted = 0;
    const int stride = std::max(1, options.sample_stride);

    auto on_accept = [&](const DenseStep<14>& dense, double t, const std::array<double, 14>& y) {
        ++accepted;
        // first throat crossing, located inside the step
        if (!traj.crossing_time && prev_z > 0.0 && y[2] <= 0.0) {
            traj.crossing_time = dense_root(dense, 2, 0.0, dense.t0, dense.t0 + dense.h);
        }
        prev_z = y[2];
        if (accepted % stride == 0 || t >= T) {
            traj.samples.push_back(detail::make_sample(t, y, params, source));
        }
        return StepControl::Continue;
    };

    OdeResult<14> res = solver.integrate(0.0, y0, T, on_accept);
    traj.status = res.status;
    traj.message = res.message;
    traj.n_accepted = res.n_accepted;
    traj.n_rejected = res.n_rejected;
    if (traj.samples.back().t < res.t) {
        traj.samples.push_back(detail::make_sample(res.t, res.y, params, source));
    }
    return traj;
}

// Classical (zero-moment) companion of a state: same phase point, empty
// moment block. The zero-moment submanifold is invariant, so integrating this
// state reproduces the geodesic flow.
inline MomentState classical_companion(const MomentState& s) {
    MomentState c;
    c.point = s.point;
    c.g.fill(0.0);
    return c;
}

// Time-reversal conjugation: flip both momenta and every moment with an odd
// total momentum grade b + d.
inline MomentState time_reversal_flip(const MomentState& s) {
    MomentState f = s;
    f.point.p_theta = -f.point.p_theta;
    f.point.p_z = -f.point.p_z;
    const auto& layout = MomentState::moment_layout();
    for (int i = 0; i < 10; ++i) {
        const MomentIndex& idx = layout[static_cast<std::size_t>(i)];
        if ((idx.b + idx.d) % 2 != 0) f.g[static_cast<std::size_t>(i)] *= -1.0;
    }
    return f;
}

// Default experiment horizon: the time for the classical analogue to sweep a
// path length of 4 z0 in z, capped at 5.
inline double default_horizon(const MomentState& state0, const SystemParams& params) {
    const double cap = 5.0;
    const double target = 4.0 * std::abs(state0.point.z);
    if (target == 0.0) return cap;

    const CompiledRhs rhs = compile_rhs(HqSource::Generated, params);
    detail::CompiledRhsFunctor f{&rhs};
    Dopri5<14, detail::CompiledRhsFunctor> solver(f, 1e-10, 1e-10);

    std::array<double, 14> y0 = classical_companion(state0).to_array(state0.point.theta);
    double path = 0.0;
    double prev_z = y0[2];
    double t_hit = cap;
    auto on_accept = [&](const DenseStep<14>&, double t, const std::array<double, 14>& y) {
        path += std::abs(y[2] - prev_z);
        prev_z = y[2];
        if (path >= target) {
            t_hit = t;
            return StepControl::Stop;
        }
        return StepControl::Continue;
    };
    OdeResult<14> res = solver.integrate(0.0, y0, cap, on_accept);
    (void)res;
    return std::min(t_hit, cap);
}

enum class Verdict { Reflected, Transmitted, Undetermined };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Reflected: return "Reflected";
        case Verdict::Transmitted: return "Transmitted";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "unknown";
}

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> crossing_time;  // required for Transmitted
    double min_z = 0.0;
    double max_excursion = 0.0;  // max_t |z(t) - z0|
};

// Reflection/transmission verdict for a trajectory launched from z0 > 0 with
// p_z0 <= 0 toward the throat. Transmitted: z reaches -z_far (default z0).
// Reflected: z returns above z0 moving outward after a turning point. If the
// horizon ends first, the verdict is Undetermined.
inline Classification classify(const Trajectory& traj, double z_far = -1.0) {
    if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
    const double z0 = traj.samples.front().state.point.z;
    const double pz0 = traj.samples.front().state.point.p_z;
    if (!(z0 > 0.0) || pz0 > 0.0) {
        throw std::invalid_argument("classification requires launch from z0 > 0 with p_z0 <= 0");
    }
    if (z_far <= 0.0) z_far = z0;

    Classification c;
    c.min_z = z0;
    double prev_z = z0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const double z = traj.samples[i].state.point.z;
        c.min_z = std::min(c.min_z, z);
        c.max_excursion = std::max(c.max_excursion, std::abs(z - z0));
        if (z <= -z_far) {
            c.verdict = Verdict::Transmitted;
            c.crossing_time = traj.crossing_time;
            return c;
        }
        if (i > 0 && z > z0 && z > prev_z) {
            c.verdict = Verdict::Reflected;
            c.crossing_time = traj.crossing_time;
            return c;
        }
        prev_z = z;
    }
    c.verdict = Verdict::Undetermined;
    c.crossing_time = traj.crossing_time;
    return c;
}

struct ConservedReport {
    double hq_drift = 0.0;       // max relative drift of H_Q (matching source)
    double p_theta_drift = 0.0;  // max relative drift of p_theta
    double g0200_drift = 0.0;    // max relative drift of G^{0,2,0,0}
    double theta_floor_violation = 0.0;  // max(0, hbar^2/4 (1 - tol) - U_theta)
    double z_floor_violation = 0.0;      // z-sector analogue
};

inline ConservedReport conserved_report(const Trajectory& traj) {
    if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
    ConservedReport r;
    const double hq0 = traj.samples.front().h_q;
    const double pt0 = traj.samples.front().state.point.p_theta;
    const double g0 = traj.samples.front().state.g[7];
    const double floor =
        traj.params.hbar * traj.params.hbar / 4.0 * (1.0 - 1e-6);
    auto rel = [](double x, double x0) {
        const double scale = std::max(std::abs(x0), 1e-30);
        return std::abs(x - x0) / scale;
    };
    for (const TrajectorySample& s : traj.samples) {
        r.hq_drift = std::max(r.hq_drift, rel(s.h_q, hq0));
        r.p_theta_drift = std::max(r.p_theta_drift, rel(s.state.point.p_theta, pt0));
        r.g0200_drift = std::max(r.g0200_drift, rel(s.state.g[7], g0));
        r.theta_floor_violation = std::max(r.theta_floor_violation, floor - s.u_theta);
        r.z_floor_violation = std::max(r.z_floor_violation, floor - s.u_z);
    }
    r.theta_floor_violation = std::max(0.0, r.theta_floor_violation);
    r.z_floor_violation = std::max(0.0, r.z_floor_violation);
    return r;
}

} // namespace catenoid
