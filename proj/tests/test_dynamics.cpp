#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "catenoid/dynamics.hpp"
#include "catenoid/eom.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/ode.hpp"

using namespace catenoid;

namespace {

const SystemParams kRef{};

// Independent restatement of both equation-of-motion systems, written directly
// from the Hamiltonian flow of
//   H_Q = eta [P2 - (4t/R) X g4 - 4 R t p_z g6 + k g8 + k R^2 g10 + (k/R^2) A P2 g9]
// with k = 1, X = p_theta (generated) and k = 2, X = p_theta^2 (transcribed).
// g-numbering follows the storage order g1..g10 = positions 0..9.
MomentState hand_rhs(const MomentState& s, const SystemParams& P, int kappa, bool x_is_pt2) {
    const double R = P.R, m = P.mass;
    const double pt = s.point.p_theta, pz = s.point.p_z;
    const double se = 1.0 / std::cosh(s.point.z / R);
    const double s2 = se * se;
    const double tn = std::tanh(s.point.z / R);
    const double eta = s2 / (2.0 * m * R * R);
    const double A = 2.0 - 3.0 * s2;
    const double P2 = pt * pt + R * R * pz * pz;
    const double X = x_is_pt2 ? pt * pt : pt;
    const double dX = x_is_pt2 ? 2.0 * pt : 1.0;
    const double k = static_cast<double>(kappa);

    const double g1 = s.g[0], g2 = s.g[1], g3 = s.g[2], g4 = s.g[3], g5 = s.g[4], g6 = s.g[5],
                 g8 = s.g[7], g9 = s.g[8], g10 = s.g[9];

    const double C4 = -(4.0 * eta * tn / R) * X;
    const double C6 = -4.0 * eta * R * tn * pz;
    const double C8 = k * eta;
    const double C10 = k * eta * R * R;
    const double C9 = (k * eta / (R * R)) * A * P2;

    MomentState d;
    d.point.theta = 2.0 * eta * pt - (4.0 * eta * tn / R) * dX * g4 +
                    (2.0 * k * eta / (R * R)) * A * pt * g9;
    d.point.p_theta = 0.0;
    d.point.z = 2.0 * eta * R * R * pz - 4.0 * eta * R * tn * g6 + 2.0 * k * eta * A * pz * g9;
    const double S = P2 - (4.0 * tn / R) * X * g4 - 4.0 * R * tn * pz * g6 + k * g8 +
                     k * R * R * g10 + (k / (R * R)) * A * P2 * g9;
    const double S_z = -(4.0 * s2 / (R * R)) * X * g4 - 4.0 * s2 * pz * g6 +
                       (k / (R * R)) * (6.0 * s2 * tn / R) * P2 * g9;
    d.point.p_z = (2.0 * tn / R) * eta * S - eta * S_z;

    d.g[0] = C4 * g4 + 2.0 * C8 * g8;
    d.g[1] = C4 * g9 + C6 * g2 + 2.0 * C8 * g4 + 2.0 * C10 * g3;
    d.g[2] = C4 * (g6 - g1) - C6 * g3 + 2.0 * C8 * g5 - 2.0 * C9 * g2;
    d.g[3] = C6 * g4 + 2.0 * C10 * g5;
    d.g[4] = -C4 * g8 - C6 * g5 - 2.0 * C9 * g4;
    d.g[5] = -C4 * g4 - 2.0 * C9 * g9 + 2.0 * C10 * g10;
    d.g[6] = 2.0 * C4 * g2 + 4.0 * C8 * g1;
    d.g[7] = 0.0;
    d.g[8] = 2.0 * C6 * g9 + 4.0 * C10 * g6;
    d.g[9] = -2.0 * C4 * g5 - 2.0 * C6 * g10 - 4.0 * C9 * g6;
    return d;
}

MomentState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> mom(-4.0, 4.0);
    std::uniform_real_distribution<double> zd(-1.5, 1.5);
    std::uniform_real_distribution<double> gd(-2.0, 2.0);
    std::uniform_real_distribution<double> gsq(0.1, 4.0);
    MomentState s;
    s.point = PhasePoint(mom(rng) / 4.0, mom(rng), zd(rng), mom(rng));
    for (int i = 0; i < 6; ++i) s.g[static_cast<std::size_t>(i)] = gd(rng);
    for (int i = 6; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = gsq(rng);
    return s;
}

SystemParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> rd(0.4, 1.5);
    std::uniform_real_distribution<double> md(0.5, 2.0);
    SystemParams p;
    p.R = rd(rng);
    p.mass = md(rng);
    p.hbar = 1.0;
    return p;
}

std::array<double, 14> flat(const MomentState& d) {
    std::array<double, 14> y{};
    y[0] = d.point.theta;
    y[1] = d.point.p_theta;
    y[2] = d.point.z;
    y[3] = d.point.p_z;
    for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(4 + i)] = d.g[static_cast<std::size_t>(i)];
    return y;
}

// Printed-table reference initial data (theta0=0, p_theta0=1, z0=1, p_z0=-a).
MomentState table_state(double a) {
    MomentState s;
    s.point = PhasePoint(0.0, 1.0, 1.0, -a);
    s.g = {0, 0, 0, 0, 0, 0, 0.05, 5.0, 0.06, 4.169094014469417};
    return s;
}

int direction_changes(const Trajectory& traj) {
    int changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const double dz = traj.samples[i].state.point.z - traj.samples[i - 1].state.point.z;
        if (dz == 0.0) continue;
        const int sign = dz > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

} // namespace

TEST_CASE("symbolic H_Q matches the closed forms") {
    std::mt19937 rng(424242u);
    for (int trial = 0; trial < 200; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        for (HqSource src : {HqSource::Generated, HqSource::Transcribed}) {
            const double closed = effective_hamiltonian(s, p, src);
            const double symbolic = hq_expression(src).evaluate(s, p);
            REQUIRE(symbolic == Catch::Approx(closed).epsilon(1e-13).margin(1e-14));
        }
    }
}

TEST_CASE("generated RHS equals the hand flow table") {
    std::mt19937 rng(1111u);
    for (int trial = 0; trial < 200; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        MomentState got = eom_rhs_generated(s, p);
        MomentState want = hand_rhs(s, p, 1, false);
        auto a = flat(got), b = flat(want);
        for (int i = 0; i < 14; ++i) {
            REQUIRE(a[static_cast<std::size_t>(i)] ==
                    Catch::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-12).margin(1e-13));
        }
    }
}

TEST_CASE("transcribed RHS equals the hand flow table") {
    std::mt19937 rng(2222u);
    for (int trial = 0; trial < 200; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        MomentState got = eom_rhs_transcribed(s, p);
        MomentState want = hand_rhs(s, p, 2, true);
        auto a = flat(got), b = flat(want);
        for (int i = 0; i < 14; ++i) {
            REQUIRE(a[static_cast<std::size_t>(i)] ==
                    Catch::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-12).margin(1e-13));
        }
    }
}

TEST_CASE("RHS classical sector is the gradient of H_Q") {
    // Independent cross-check: central differences of the closed-form H_Q.
    std::mt19937 rng(3333u);
    auto fd = [](auto f, double x, double h) {
        const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
        return (4.0 * d2 - d1) / 3.0;
    };
    for (int trial = 0; trial < 50; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        for (HqSource src : {HqSource::Generated, HqSource::Transcribed}) {
            MomentState d = src == HqSource::Generated ? eom_rhs_generated(s, p)
                                                       : eom_rhs_transcribed(s, p);
            auto h_of_pt = [&](double v) {
                MomentState q = s;
                q.point.p_theta = v;
                return effective_hamiltonian(q, p, src);
            };
            auto h_of_pz = [&](double v) {
                MomentState q = s;
                q.point.p_z = v;
                return effective_hamiltonian(q, p, src);
            };
            auto h_of_z = [&](double v) {
                MomentState q = s;
                q.point.z = v;
                return effective_hamiltonian(q, p, src);
            };
            const double h = 1e-5;
            CHECK(d.point.theta == Catch::Approx(fd(h_of_pt, s.point.p_theta, h))
                                       .epsilon(5e-8)
                                       .margin(1e-8));
            CHECK(d.point.z ==
                  Catch::Approx(fd(h_of_pz, s.point.p_z, h)).epsilon(5e-8).margin(1e-8));
            CHECK(d.point.p_z ==
                  Catch::Approx(-fd(h_of_z, s.point.z, h)).epsilon(5e-8).margin(1e-8));
        }
    }
}

TEST_CASE("zero moments reduce to the classical geodesic") {
    std::mt19937 rng(4444u);
    for (int trial = 0; trial < 100; ++trial) {
        MomentState s = random_state(rng);
        s.g.fill(0.0);
        SystemParams p = random_params(rng);
        const double R = p.R, m = p.mass;
        const double s2 = sech(s.point.z / R) * sech(s.point.z / R);
        const double tn = std::tanh(s.point.z / R);
        const double P2 = s.point.p_theta * s.point.p_theta + R * R * s.point.p_z * s.point.p_z;

        for (MomentState d : {eom_rhs_generated(s, p), eom_rhs_transcribed(s, p)}) {
            CHECK(d.point.theta ==
                  Catch::Approx(s2 * s.point.p_theta / (m * R * R)).margin(1e-15));
            CHECK(d.point.p_theta == 0.0);
            CHECK(d.point.z == Catch::Approx(s2 * s.point.p_z / m).margin(1e-15));
            CHECK(d.point.p_z == Catch::Approx(tn * s2 * P2 / (m * R * R * R)).margin(1e-13));
            for (double gd : d.g) CHECK(gd == 0.0);
        }
    }
}

TEST_CASE("conserved rows and unwrapped angular rate") {
    std::mt19937 rng(5555u);
    for (int trial = 0; trial < 100; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        MomentState dg = eom_rhs_generated(s, p);
        MomentState dt = eom_rhs_transcribed(s, p);
        CHECK(dg.point.p_theta == 0.0);
        CHECK(dt.point.p_theta == 0.0);
        CHECK(dg.g[7] == 0.0);
        CHECK(dt.g[7] == 0.0);
    }
    // d(theta)/dt must come back raw, not angle-wrapped
    MomentState fast;
    fast.point = PhasePoint(0.0, 30.0, 0.0, 0.0);
    MomentState d = eom_rhs_generated(fast, kRef);
    CHECK(d.point.theta == Catch::Approx(120.0).epsilon(1e-14));
}

TEST_CASE("verbatim transcribed table differs from the flow in exactly three rows") {
    std::mt19937 rng(6666u);
    for (int trial = 0; trial < 100; ++trial) {
        MomentState s = random_state(rng);
        SystemParams p = random_params(rng);
        auto flow = flat(eom_rhs_transcribed(s, p));
        auto verbatim = flat(eom_rhs_transcribed_verbatim(s, p));

        // identical rows
        for (int i : {0, 1, 3, 4 + 0, 4 + 1, 4 + 2, 4 + 4, 4 + 5, 4 + 7, 4 + 8, 4 + 9}) {
            REQUIRE(verbatim[static_cast<std::size_t>(i)] ==
                    Catch::Approx(flow[static_cast<std::size_t>(i)]).epsilon(1e-12).margin(1e-13));
        }
        // dz/dt: verbatim value is short exactly one factor of R
        REQUIRE(verbatim[2] * p.R ==
                Catch::Approx(flow[2]).epsilon(1e-12).margin(1e-13));
        // dG^{0,1,1,0}/dt: verbatim has p_z^2 where the flow has p_z
        {
            const double R = p.R, m = p.mass;
            const double se = sech(s.point.z / R);
            const double eta = se * se / (2.0 * m * R * R);
            const double tn = std::tanh(s.point.z / R);
            const double pz = s.point.p_z;
            const double expected = flow[4 + 3] +
                                    (-4.0 * R * eta * tn * s.g[3]) * (pz * pz - pz);
            REQUIRE(printed[4 + 3] == Catch::Approx(expected).epsilon(1e-12).margin(1e-13));
        }
        // dG^{2,0,0,0}/dt: printed first-term coefficient -4 instead of -8
        {
            const double R = p.R, m = p.mass;
            const double se = sech(s.point.z / R);
            const double eta = se * se / (2.0 * m * R * R);
            const double tn = std::tanh(s.point.z / R);
            const double pt = s.point.p_theta;
            const double expected = flow[4 + 6] + (4.0 * eta * tn / R) * pt * pt * s.g[1];
            REQUIRE(printed[4 + 6] == Catch::Approx(expected).epsilon(1e-12).margin(1e-13));
        }
    }
}

// --- integrator ---

namespace {
struct Sho {
    void operator()(double, const std::array<double, 2>& y, std::array<double, 2>& d) const {
        d[0] = y[1];
        d[1] = -y[0];
    }
};
struct Blowup {
    void operator()(double, const std::array<double, 1>& y, std::array<double, 1>& d) const {
        d[0] = y[0] * y[0];
    }
};
} // namespace

TEST_CASE("integrator accuracy and dense output on the harmonic oscillator") {
    Dopri5<2, Sho> solver(Sho{}, 1e-10, 1e-10);
    std::array<double, 2> y0{1.0, 0.0};
    double worst_dense = 0.0;
    auto cb = [&](const DenseStep<2>& dsn, double, const std::array<double, 2>&) {
        for (int i = 1; i < 4; ++i) {
            const double tm = dsn.t0 + dsn.h * i / 4.0;
            const double err = std::abs(dsn.evaluate(tm)[0] - std::cos(tm));
            worst_dense = std::max(worst_dense, err);
        }
        return StepControl::Continue;
    };
    OdeResult<2> res = solver.integrate(0.0, y0, 10.0, cb);
    REQUIRE(res.status == OdeStatus::Ok);
    CHECK(res.t == 10.0);
    CHECK(std::abs(res.y[0] - std::cos(10.0)) < 1e-9);
    CHECK(std::abs(res.y[1] + std::sin(10.0)) < 1e-9);
    CHECK(worst_dense < 1e-8);
    CHECK(res.n_accepted > 20);
}

TEST_CASE("integrator reports blow-up as step underflow with last good state") {
    Dopri5<1, Blowup> solver(Blowup{}, 1e-10, 1e-10);
    std::array<double, 1> y0{1.0};
    auto cb = [](const DenseStep<1>&, double, const std::array<double, 1>&) {
        return StepControl::Continue;
    };
    OdeResult<1> res = solver.integrate(0.0, y0, 2.0, cb);
    REQUIRE(res.status != OdeStatus::Ok);
    CHECK(res.t > 0.9);
    CHECK(res.t < 1.01);
    CHECK(std::isfinite(res.y[0]));
    CHECK_FALSE(res.message.empty());
}

TEST_CASE("early stop via callback") {
    Dopri5<2, Sho> solver(Sho{}, 1e-10, 1e-10);
    std::array<double, 2> y0{1.0, 0.0};
    auto cb = [](const DenseStep<2>&, double t, const std::array<double, 2>&) {
        return t >= 1.0 ? StepControl::Stop : StepControl::Continue;
    };
    OdeResult<2> res = solver.integrate(0.0, y0, 10.0, cb);
    REQUIRE(res.status == OdeStatus::Ok);
    CHECK(res.t >= 1.0);
    CHECK(res.t < 1.5);
}

// --- trajectories ---

TEST_CASE("trajectory basics and the classical conservation example") {
    MomentState s0 = table_state(8.0);
    MomentState cls = classical_companion(s0);
    Trajectory traj = integrate(cls, kRef, 1.0, HqSource::Generated);
    REQUIRE(traj.completed());
    REQUIRE(traj.samples.size() > 10);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.front().state.point.z == 1.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        REQUIRE(traj.samples[i].t > traj.samples[i - 1].t);
    }
    CHECK(traj.samples.back().t == Catch::Approx(1.0));
    const double h0 = classical_hamiltonian(traj.samples.front().state.point, kRef);
    const double h1 = classical_hamiltonian(traj.samples.back().state.point, kRef);
    CHECK(std::abs((h1 - h0) / h0) < 1e-8);
    for (const auto& smp : traj.samples) {
        for (double g : smp.state.g) REQUIRE(g == 0.0);
    }
}

TEST_CASE("single-particle bounce: transcribed, a=1, T=0.25") {
    Trajectory traj = integrate(table_state(1.0), kRef, 0.25, HqSource::Transcribed);
    REQUIRE(traj.completed());

    double min_z = 1.0, min_utheta = 1.0;
    for (const auto& smp : traj.samples) {
        min_z = std::min(min_z, smp.state.point.z);
        min_utheta = std::min(min_utheta, smp.u_theta);
    }
    CHECK(min_z > 0.0);
    CHECK(min_z == Catch::Approx(0.990561).margin(2e-4));
    CHECK(direction_changes(traj) == 1);
    CHECK(min_utheta == Catch::Approx(0.25).margin(1e-9));

    ConservedReport rep = conserved_report(traj);
    CHECK(rep.hq_drift < 1e-8);
    CHECK(rep.p_theta_drift < 1e-12);
    CHECK(rep.g0200_drift < 1e-12);
    CHECK(rep.theta_floor_violation == 0.0);
    CHECK(rep.z_floor_violation == 0.0);

    // At T=0.25 the packet has rebounded but not yet climbed back above z0
    // (that happens near t=0.2815), so the strict verdict is Undetermined.
    Classification c = classify(traj);
    CHECK(c.verdict == Verdict::Undetermined);
    CHECK_FALSE(c.crossing_time.has_value());

    // A slightly longer horizon resolves it as Reflected.
    Trajectory longer = integrate(table_state(1.0), kRef, 0.6, HqSource::Transcribed);
    REQUIRE(longer.completed());
    CHECK(classify(longer).verdict == Verdict::Reflected);
}

TEST_CASE("transcribed runs never reach the far side (energetic blockade)") {
    for (double a : {7.0, 8.4, 9.6}) {
        Trajectory traj = integrate(table_state(a), kRef, 5.0, HqSource::Transcribed);
        REQUIRE(traj.completed());
        Classification c = classify(traj);
        CHECK(c.verdict == Verdict::Reflected);
        CHECK(c.min_z > 0.0);
    }
    // frozen turning points
    auto min_z_of = [](double a) {
        Trajectory traj = integrate(table_state(a), kRef, 3.0, HqSource::Transcribed);
        double m = 1.0;
        for (const auto& smp : traj.samples) m = std::min(m, smp.state.point.z);
        return m;
    };
    CHECK(min_z_of(7.0) == Catch::Approx(0.747).margin(5e-3));
    CHECK(min_z_of(8.4) == Catch::Approx(0.696).margin(5e-3));
    CHECK(min_z_of(9.6) == Catch::Approx(0.658).margin(5e-3));
}

TEST_CASE("generated run hits a finite-time singularity at a=9.6") {
    Trajectory traj = integrate(table_state(9.6), kRef, 1.0, HqSource::Generated);
    CHECK_FALSE(traj.completed());
    CHECK(traj.t_reached() > 0.4);
    CHECK(traj.t_reached() < 0.6);
    CHECK_FALSE(traj.message.empty());
    // every recorded sample is finite (failure keeps the last good state)
    for (const auto& smp : traj.samples) {
        REQUIRE(std::isfinite(smp.state.point.z));
        REQUIRE(std::isfinite(smp.h_q));
    }
    Classification c = classify(traj);
    CHECK(c.verdict == Verdict::Undetermined);
}

TEST_CASE("generated runs at lower a complete T=1 and conserve their H_Q") {
    for (double a : {1.0, 7.0, 8.4}) {
        Trajectory traj = integrate(table_state(a), kRef, 1.0, HqSource::Generated);
        REQUIRE(traj.completed());
        ConservedReport rep = conserved_report(traj);
        CHECK(rep.hq_drift < 1e-8);
        CHECK(rep.p_theta_drift < 1e-12);
        CHECK(rep.g0200_drift < 1e-12);
    }
}

TEST_CASE("transcribed conservation over T=1 for the reference data set") {
    for (double a : {1.0, 7.0, 8.4, 9.6}) {
        Trajectory traj = integrate(table_state(a), kRef, 1.0, HqSource::Transcribed);
        REQUIRE(traj.completed());
        ConservedReport rep = conserved_report(traj);
        CHECK(rep.hq_drift < 1e-8);
        CHECK(rep.p_theta_drift < 1e-12);
        CHECK(rep.g0200_drift < 1e-12);
        CHECK(rep.theta_floor_violation == 0.0);
        CHECK(rep.z_floor_violation == 0.0);
    }
}

TEST_CASE("time reversal recovers the initial state") {
    MomentState s0 = table_state(1.0);
    Trajectory fwd = integrate(s0, kRef, 0.5, HqSource::Generated);
    REQUIRE(fwd.completed());
    MomentState mid = time_reversal_flip(fwd.samples.back().state);
    Trajectory back = integrate(mid, kRef, 0.5, HqSource::Generated);
    REQUIRE(back.completed());
    MomentState rec = time_reversal_flip(back.samples.back().state);

    CHECK(rec.point.theta == Catch::Approx(s0.point.theta).margin(1e-6));
    CHECK(rec.point.p_theta == Catch::Approx(s0.point.p_theta).margin(1e-6));
    CHECK(rec.point.z == Catch::Approx(s0.point.z).margin(1e-6));
    CHECK(rec.point.p_z == Catch::Approx(s0.point.p_z).margin(1e-6));
    for (int i = 0; i < 10; ++i) {
        CHECK(rec.g[static_cast<std::size_t>(i)] ==
              Catch::Approx(s0.g[static_cast<std::size_t>(i)]).margin(1e-6));
    }
}

TEST_CASE("classical classification brackets the threshold") {
    auto classical_verdict = [&](double a) {
        MomentState s = classical_companion(table_state(a));
        const double T = default_horizon(s, kRef);
        Trajectory traj = integrate(s, kRef, T, HqSource::Generated);
        return classify(traj).verdict;
    };
    CHECK(classical_verdict(7.0) == Verdict::Reflected);
    CHECK(classical_verdict(7.5) == Verdict::Transmitted);

    // transmitted runs must carry a crossing time
    MomentState s = classical_companion(table_state(9.0));
    Trajectory traj = integrate(s, kRef, default_horizon(s, kRef), HqSource::Generated);
    Classification c = classify(traj);
    REQUIRE(c.verdict == Verdict::Transmitted);
    REQUIRE(c.crossing_time.has_value());
    CHECK(*c.crossing_time > 0.0);
    CHECK(*c.crossing_time < traj.t_reached());
}

TEST_CASE("drift grows when tolerances are loosened") {
    MomentState s0 = table_state(7.0);
    Trajectory tight = integrate(s0, kRef, 1.0, HqSource::Transcribed, 1e-10, 1e-10);
    Trajectory loose = integrate(s0, kRef, 1.0, HqSource::Transcribed, 1e-6, 1e-6);
    REQUIRE(tight.completed());
    REQUIRE(loose.completed());
    CHECK(conserved_report(loose).hq_drift > conserved_report(tight).hq_drift);
}

TEST_CASE("default horizon") {
    // From z0 = 1 the exponentially flattening metric keeps the classical
    // z-speed tiny at |z| > 1.5, so a 4 z0 path is out of reach and the cap
    // applies for every reference launch.
    CHECK(default_horizon(table_state(9.6), kRef) == 5.0);
    CHECK(default_horizon(table_state(1.0), kRef) == 5.0);
    // Near the throat the speed is order one and the traverse is quick.
    MomentState near_throat;
    near_throat.point = PhasePoint(0.0, 1.0, 0.2, -9.6);
    const double t_near = default_horizon(near_throat, kRef);
    CHECK(t_near > 0.0);
    CHECK(t_near < 1.0);
    // A packet parked at the throat has no length scale; the cap applies.
    MomentState parked;
    parked.point = PhasePoint(0.0, 1.0, 0.0, 0.0);
    CHECK(default_horizon(parked, kRef) == 5.0);
}

TEST_CASE("classify validates its launch precondition") {
    MomentState bad;
    bad.point = PhasePoint(0.0, 1.0, -1.0, -1.0);
    Trajectory traj = integrate(bad, kRef, 0.1, HqSource::Generated);
    CHECK_THROWS_AS(classify(traj), std::invalid_argument);

    MomentState wrong_dir;
    wrong_dir.point = PhasePoint(0.0, 1.0, 1.0, 0.5);
    Trajectory traj2 = integrate(wrong_dir, kRef, 0.1, HqSource::Generated);
    CHECK_THROWS_AS(classify(traj2), std::invalid_argument);
}

TEST_CASE("integrate validates its arguments") {
    MomentState s = table_state(1.0);
    CHECK_THROWS_AS(integrate(s, kRef, 0.0, HqSource::Generated), std::invalid_argument);
    CHECK_THROWS_AS(integrate(s, kRef, 1.0, HqSource::Generated, -1e-10, 1e-10),
                    std::invalid_argument);
    SystemParams bad = kRef;
    bad.R = -1.0;
    CHECK_THROWS_AS(integrate(s, bad, 1.0, HqSource::Generated), std::invalid_argument);
}
