#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "catenoid/canonical.hpp"
#include "catenoid/geometry.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/params.hpp"
#include "catenoid/state.hpp"
#include "hyperdual.hpp"

using namespace catenoid;

namespace {
const SystemParams kRef{}; // hbar = m = 1, R = 1/2
}

TEST_CASE("system params validation") {
    CHECK_NOTHROW(kRef.validate());
    SystemParams bad = kRef;
    bad.R = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kRef;
    bad.mass = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kRef;
    bad.hbar = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(M_PI) == Catch::Approx(-M_PI));
    CHECK(wrap_angle(-M_PI) == Catch::Approx(-M_PI));
    CHECK(wrap_angle(3.0 * M_PI / 2.0) == Catch::Approx(-M_PI / 2.0));
    CHECK(wrap_angle(7.0 * M_PI) == Catch::Approx(-M_PI));
    CHECK(PhasePoint(5.0 * M_PI / 2.0, 0, 0, 0).theta == Catch::Approx(M_PI / 2.0));
}

TEST_CASE("safe sech") {
    CHECK(sech(0.0) == 1.0);
    CHECK(sech(2.0) == Catch::Approx(1.0 / std::cosh(2.0)).epsilon(1e-15));
    CHECK(sech(1000.0) == 0.0);
    CHECK(sech(-1000.0) == 0.0);
    CHECK(std::isfinite(sech(710.0)));
}

TEST_CASE("gaussian curvature") {
    CHECK(gaussian_curvature(0.0, kRef) == Catch::Approx(-4.0).epsilon(1e-15));
    CHECK(std::abs(gaussian_curvature(50.0, kRef)) < 1e-170);
    for (double z : {0.1, 0.7, 2.0}) {
        CHECK(gaussian_curvature(z, kRef) == Catch::Approx(gaussian_curvature(-z, kRef)));
    }
}

TEST_CASE("mean curvature is identically zero") {
    CHECK(mean_curvature() == 0.0);
}

TEST_CASE("geometric potential") {
    CHECK(geometric_potential(0.0, kRef) == Catch::Approx(-2.0).epsilon(1e-15));
    CHECK(std::abs(geometric_potential(60.0, kRef)) < 1e-200);
    for (double z : {-1.5, -0.2, 0.0, 0.4, 2.2}) {
        CHECK(geometric_potential(z, kRef) ==
              Catch::Approx(kRef.hbar * kRef.hbar / (2.0 * kRef.mass) *
                            gaussian_curvature(z, kRef)));
    }
}

TEST_CASE("classical Hamiltonian") {
    PhasePoint p(0.0, 1.0, 1.0, -1.0);
    const double s2 = 1.0 / (std::cosh(2.0) * std::cosh(2.0));
    CHECK(classical_hamiltonian(p, kRef) == Catch::Approx(2.5 * s2).epsilon(1e-14));
    CHECK(classical_hamiltonian(p, kRef) == Catch::Approx(0.17662706213291128).epsilon(1e-12));

    CHECK(classical_hamiltonian(PhasePoint(0.3, 0.0, 0.7, 0.0), kRef) == 0.0);

    PhasePoint flipped(0.0, 1.0, -1.0, -1.0);
    CHECK(classical_hamiltonian(flipped, kRef) == Catch::Approx(classical_hamiltonian(p, kRef)));
}

TEST_CASE("canonical transform basics") {
    CanonicalPoint c = canonical_transform(PhasePoint(0.0, 3.0, 0.0, -2.0), kRef);
    CHECK(c.Q1 == 0.0);
    CHECK(c.P1 == Catch::Approx(-2.0));
    CHECK(c.Q2 == 0.0);
    CHECK(c.P2 == Catch::Approx(3.0));
}

TEST_CASE("kamiltonian printed values") {
    CHECK(kamiltonian({0.0, -1.0, 0.0, 1.0}, kRef) == Catch::Approx(2.5).epsilon(1e-15));
    // pure kinetic form at Q = 0
    CHECK(kamiltonian({0.0, 2.0, 0.0, 3.0}, kRef) ==
          Catch::Approx(2.0 + 9.0 / (2.0 * 0.25)).epsilon(1e-15));
}

namespace {

struct RandomPoint {
    PhasePoint p;
    SystemParams params;
};

RandomPoint draw_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> theta(-3.0, 3.0);
    std::uniform_real_distribution<double> mom(-5.0, 5.0);
    std::uniform_real_distribution<double> zdist(-1.5, 1.5);
    std::uniform_real_distribution<double> rdist(0.4, 1.6);
    std::uniform_real_distribution<double> mdist(0.5, 2.0);
    RandomPoint rp;
    rp.params.R = rdist(rng);
    rp.params.mass = mdist(rng);
    rp.params.hbar = 1.0;
    rp.p = PhasePoint(theta(rng), mom(rng), zdist(rng), mom(rng));
    return rp;
}

} // namespace

TEST_CASE("kamiltonian composed with the transform reproduces H") {
    std::mt19937 rng(7321u);
    for (int i = 0; i < 1000; ++i) {
        RandomPoint rp = draw_point(rng);
        const double h = classical_hamiltonian(rp.p, rp.params);
        const double k = kamiltonian(canonical_transform(rp.p, rp.params), rp.params);
        REQUIRE(std::abs(k - h) <= 1e-12 * std::max(1.0, std::abs(h)));
    }
}

TEST_CASE("canonical transform is symplectic") {
    std::mt19937 rng(9911u);
    // Extended precision keeps finite-difference roundoff well under the
    // 1e-10 budget. Coordinates ordered (theta, p_theta, z, p_z) -> (Q1, P1, Q2, P2).
    const long double omega[4][4] = {
        {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};

    for (int trial = 0; trial < 1000; ++trial) {
        RandomPoint rp = draw_point(rng);
        std::array<long double, 4> x{static_cast<long double>(wrap_angle(rp.p.theta)),
                                     static_cast<long double>(rp.p.p_theta),
                                     static_cast<long double>(rp.p.z),
                                     static_cast<long double>(rp.p.p_z)};
        const long double R = static_cast<long double>(rp.params.R);
        long double J[4][4];
        for (int col = 0; col < 4; ++col) {
            // one Richardson level on the central difference
            auto diff = [&](long double h) {
                std::array<long double, 4> xp = x, xm = x;
                xp[static_cast<std::size_t>(col)] += h;
                xm[static_cast<std::size_t>(col)] -= h;
                auto fp = canonical_map<long double>(xp[0], xp[1], xp[2], xp[3], R);
                auto fm = canonical_map<long double>(xm[0], xm[1], xm[2], xm[3], R);
                std::array<long double, 4> d{};
                for (int r = 0; r < 4; ++r) {
                    d[static_cast<std::size_t>(r)] =
                        (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) /
                        (2.0L * h);
                }
                return d;
            };
            const long double h = 1e-4L;
            auto d1 = diff(h), d2 = diff(h / 2.0L);
            for (int r = 0; r < 4; ++r) {
                J[r][col] = (4.0L * d2[static_cast<std::size_t>(r)] -
                             d1[static_cast<std::size_t>(r)]) / 3.0L;
            }
        }
        // JT Omega J must equal Omega
        long double worst = 0.0L;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                long double acc = 0.0L;
                for (int r = 0; r < 4; ++r) {
                    for (int s = 0; s < 4; ++s) acc += J[r][i] * omega[r][s] * J[s][j];
                }
                worst = std::max(worst, std::abs(acc - omega[i][j]));
            }
        }
        REQUIRE(static_cast<double>(worst) < 1e-10);
    }
}

namespace {

// Classical Hamiltonian evaluated on hyper-dual numbers: an independent
// route to the second derivatives appearing in the Taylor-expanded H_Q.
testutil::HyperDual classical_h_hd(const testutil::HyperDual& p_theta,
                                   const testutil::HyperDual& z,
                                   const testutil::HyperDual& p_z, const SystemParams& params) {
    using testutil::HyperDual;
    HyperDual ch = cosh(z / HyperDual(params.R));
    HyperDual sech2 = reciprocal(ch * ch);
    HyperDual P2 = p_theta * p_theta + HyperDual(params.R * params.R) * p_z * p_z;
    return sech2 * P2 / HyperDual(2.0 * params.mass * params.R * params.R);
}

// d^2 H / (du dv) where u, v index (p_theta, z, p_z)
double hessian_entry(int u, int v, const PhasePoint& p, const SystemParams& params) {
    using testutil::HyperDual;
    std::array<HyperDual, 3> vars{HyperDual(p.p_theta), HyperDual(p.z), HyperDual(p.p_z)};
    vars[static_cast<std::size_t>(u)].d1 = 1.0;
    vars[static_cast<std::size_t>(v)].d2 = 1.0;
    return classical_h_hd(vars[0], vars[1], vars[2], params).d12;
}

} // namespace

TEST_CASE("generated effective Hamiltonian: basic values") {
    MomentState s;
    s.point = PhasePoint(0.0, 1.0, 1.0, -1.0);

    // zero moments: both sources reduce to the classical value
    const double h = classical_hamiltonian(s.point, kRef);
    CHECK(effective_hamiltonian(s, kRef, HqSource::Generated) == Catch::Approx(h));
    CHECK(effective_hamiltonian(s, kRef, HqSource::Transcribed) == Catch::Approx(h));

    // single moment G^{0,2,0,0} = 5 at z = 0
    MomentState b;
    b.point = PhasePoint(0.0, 1.0, 0.0, -1.0);
    b.g[7] = 5.0;
    const double hb = classical_hamiltonian(b.point, kRef);
    CHECK(effective_hamiltonian(b, kRef, HqSource::Transcribed) == Catch::Approx(hb + 20.0));
    CHECK(effective_hamiltonian(b, kRef, HqSource::Generated) == Catch::Approx(hb + 10.0));
}

TEST_CASE("generated effective Hamiltonian equals the Taylor sum from the AD oracle") {
    std::mt19937 rng(5150u);
    std::uniform_real_distribution<double> gdist(-2.0, 2.0);
    std::uniform_real_distribution<double> gsq(0.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        RandomPoint rp = draw_point(rng);
        MomentState s;
        s.point = rp.p;
        for (int i = 0; i < 6; ++i) s.g[static_cast<std::size_t>(i)] = gdist(rng);
        for (int i = 6; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = gsq(rng);

        // Taylor sum over b+c+d = 2 with moments G^{0,b,c,d}:
        //   (1/b!c!d!) d^2H/(dp_theta^b dz^c dp_z^d) G^{0,b,c,d}
        auto g = [&](int b, int c, int d) { return s.moment(MomentIndex(0, b, c, d)); };
        double correction = 0.0;
        correction += 0.5 * hessian_entry(0, 0, rp.p, rp.params) * g(2, 0, 0);
        correction += 0.5 * hessian_entry(1, 1, rp.p, rp.params) * g(0, 2, 0);
        correction += 0.5 * hessian_entry(2, 2, rp.p, rp.params) * g(0, 0, 2);
        correction += hessian_entry(0, 1, rp.p, rp.params) * g(1, 1, 0);
        correction += hessian_entry(0, 2, rp.p, rp.params) * g(1, 0, 1);
        correction += hessian_entry(1, 2, rp.p, rp.params) * g(0, 1, 1);

        const double want = classical_hamiltonian(rp.p, rp.params) + correction;
        const double got = effective_hamiltonian(s, rp.params, HqSource::Generated);
        REQUIRE(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("generated effective Hamiltonian momentum-parity invariance") {
    std::mt19937 rng(77123u);
    std::uniform_real_distribution<double> gdist(-2.0, 2.0);
    std::uniform_real_distribution<double> gsq(0.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        RandomPoint rp = draw_point(rng);
        MomentState s;
        s.point = rp.p;
        for (int i = 0; i < 6; ++i) s.g[static_cast<std::size_t>(i)] = gdist(rng);
        for (int i = 6; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = gsq(rng);

        MomentState f = s;
        f.point.p_theta = -f.point.p_theta;
        f.point.p_z = -f.point.p_z;
        // flip moments with odd b+d: positions 0 (1100), 2 (1001), 3 (0110), 5 (0011)
        for (int i : {0, 2, 3, 5}) f.g[static_cast<std::size_t>(i)] *= -1.0;

        CHECK(effective_hamiltonian(f, rp.params, HqSource::Generated) ==
              Catch::Approx(effective_hamiltonian(s, rp.params, HqSource::Generated))
                  .epsilon(1e-13));
    }
}

TEST_CASE("effective and classical potentials") {
    MomentState zero;
    zero.point = PhasePoint(0.0, 1.0, 1.0, -7.0);
    for (double z : {-2.0, 0.0, 1.3}) {
        CHECK(effective_potential(z, zero, kRef, HqSource::Generated) == 0.0);
        CHECK(effective_potential(z, zero, kRef, HqSource::Transcribed) == 0.0);
        CHECK(classical_potential(z, zero, kRef, HqSource::Transcribed) == 0.0);
    }

    // reference initial data: moments (0,...,0, 0.05, 5, 0.06, 4.0)
    MomentState init;
    init.point = PhasePoint(0.0, 1.0, 1.0, -7.0);
    init.g = {0, 0, 0, 0, 0, 0, 0.05, 5.0, 0.06, 4.0};

    for (HqSource src : {HqSource::Generated, HqSource::Transcribed}) {
        for (double z : {-1.0, -0.25, 0.0, 0.6, 2.0}) {
            CHECK(effective_potential(z, init, kRef, src) ==
                  Catch::Approx(classical_potential(z, init, kRef, src)).epsilon(1e-14));
        }
        // far field
        CHECK(std::abs(effective_potential(40.0, init, kRef, src)) < 1e-60);
    }

    // classical potential is even in z when mixed moments vanish
    for (double z : {0.3, 1.1, 2.4}) {
        CHECK(classical_potential(z, init, kRef, HqSource::Transcribed) ==
              Catch::Approx(classical_potential(-z, init, kRef, HqSource::Transcribed)));
    }
}

TEST_CASE("classical transmission threshold") {
    CHECK(classical_transmission_threshold(1.0, 1.0, kRef) ==
          Catch::Approx(2.0 * std::sinh(2.0)).epsilon(1e-15));
    CHECK(classical_transmission_threshold(1.0, 1.0, kRef) == Catch::Approx(7.2537208156).epsilon(1e-9));
    CHECK(classical_transmission_threshold(1.0, 0.0, kRef) == 0.0);
    CHECK(classical_transmission_threshold(0.0, 1.0, kRef) == 0.0);
}

TEST_CASE("moment state bookkeeping") {
    MomentState s;
    s.point = PhasePoint(0.2, 1.0, 0.9, -2.0);
    for (int i = 0; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = 0.1 * (i + 1);

    CHECK(s.moment(MomentIndex(0, 0, 0, 0)) == 1.0);
    CHECK(s.moment(MomentIndex(1, 0, 0, 0)) == 0.0);
    CHECK(s.moment(MomentIndex(1, 1, 0, 0)) == Catch::Approx(0.1));
    CHECK(s.moment(MomentIndex(0, 0, 0, 2)) == Catch::Approx(1.0));
    CHECK_THROWS_AS(s.moment(MomentIndex(2, 1, 0, 0)), std::domain_error);

    CHECK(MomentState::moment_position(MomentIndex(0, 2, 0, 0)) == 7);
    CHECK(MomentState::moment_position(MomentIndex(3, 0, 0, 0)) == -1);

    CHECK(s.uncertainty_theta() == Catch::Approx(0.7 * 0.8 - 0.01));
    CHECK(s.uncertainty_z() == Catch::Approx(0.9 * 1.0 - 0.36));
    CHECK(s.pure_squares_nonnegative());

    auto y = s.to_array(6.5);
    CHECK(y[0] == 6.5);
    CHECK(y[2] == Catch::Approx(0.9));
    MomentState back = MomentState::from_array(y);
    CHECK(back.point.theta == Catch::Approx(wrap_angle(6.5)));
    CHECK(back.g == s.g);

    // reference initial table: theta product saturates at 0.25, z product 0.2501
    MomentState glued;
    glued.g = {0, 0, 0, 0, 0, 0, 0.05, 5.0, 0.06, 4.169094014469417};
    CHECK(glued.uncertainty_theta() == Catch::Approx(0.25).margin(1e-12));
    CHECK(glued.uncertainty_z() == Catch::Approx(0.25014564086816502).epsilon(1e-14));
    CHECK(glued.floors_ok(kRef));
    glued.g[0] = 1.0; // breaks the theta floor
    CHECK_FALSE(glued.floors_ok(kRef));

    // the cosh-measure quadrature value lands the z product below the bound
    MomentState quad = glued;
    quad.g[0] = 0.0;
    quad.g[9] = 4.0;
    CHECK(quad.uncertainty_z() == Catch::Approx(0.24));
    CHECK_FALSE(quad.floors_ok(kRef));
}
