#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "catenoid/dynamics.hpp"
#include "catenoid/gaussian.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/params.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

// Tabulated initial moment values used by reproduction runs (the same set the
// closed forms target; the last entry is the reference quadrature value).
inline constexpr std::array<double, 10> kTabulatedMoments = {
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05, 5.0, 0.06, kG0002Reference};

// One experiment description.  Defaults reproduce the reference setup; a
// config file and command-line flags override individual fields
// (flags > file > defaults).
struct RunConfig {
    SystemParams params;

    // Initial data: either the launch parameter a (p_z0 = -a) or explicit
    // phase-point coordinates; explicit values win.
    double a = 1.0;
    std::optional<double> pz;
    double theta0 = 0.0;
    double p_theta0 = 1.0;
    double z0 = 1.0;

    // Initial moments: packet widths (quadrature path), the tabulated set
    // (reproduce_paper), an explicit list, or all zero (classical).
    double lam = 10.0;
    double sigma_z = 0.31622776601683794; // sqrt(0.1)
    std::optional<std::vector<double>> moments;
    bool reproduce_paper = false;
    bool classical = false;

    std::string rhs; // "generated" | "transcribed" | "" = auto
    std::optional<double> T;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int stride = 1;

    std::string out;
    unsigned long long seed = 12345;

    // sweep grid: number of points, endpoints inclusive
    double a_min = 0.0;
    double a_max = 9.0;
    int a_steps = 10;

    // potential scan
    double z_grid_min = -2.0;
    double z_grid_max = 2.0;
    int z_samples = 201;
    double at_time = 0.0;

    // RHS source: explicit flag wins; reproduction runs default to the
    // transcribed system, everything else to the generated one.
    HqSource resolved_source() const {
        if (!rhs.empty()) return hq_source_from_string(rhs);
        return reproduce_paper ? HqSource::Transcribed : HqSource::Generated;
    }

    PhasePoint resolved_point(double launch_a) const {
        return PhasePoint(theta0, p_theta0, z0, pz ? *pz : -launch_a);
    }
    PhasePoint resolved_point() const { return resolved_point(a); }
};

// Comma-separated list of 10 moment values, as taken by --moments.
inline std::vector<double> parse_moment_list(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad moment value: '" + item + "'");
        vals.push_back(v);
    }
    if (vals.size() != 10)
        throw std::invalid_argument("--moments needs exactly 10 comma-separated values, got " +
                                    std::to_string(vals.size()));
    return vals;
}

struct ResolvedInput {
    MomentState state0;
    HqSource source = HqSource::Generated;
    double horizon = 0.0;
    // set when the moments came from the packet quadrature
    std::optional<InitialMoments> packet_record;
};

// Builds the initial MomentState and run metadata from a config.  Moment
// precedence: classical > explicit list > tabulated set > packet quadrature.
inline ResolvedInput resolve_input(const RunConfig& cfg, double launch_a) {
    cfg.params.validate();
    ResolvedInput r;
    r.source = cfg.resolved_source();

    MomentState s;
    s.point = cfg.resolved_point(launch_a);
    if (cfg.classical) {
        s.g.fill(0.0);
    } else if (cfg.moments) {
        for (int i = 0; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = (*cfg.moments)[static_cast<std::size_t>(i)];
    } else if (cfg.reproduce_paper) {
        s.g = kTabulatedMoments;
    } else {
        GaussianPacket packet;
        packet.theta0 = cfg.theta0;
        packet.z0 = cfg.z0;
        packet.lam = cfg.lam;
        packet.sigma_z = cfg.sigma_z;
        packet.l = s.point.p_z / cfg.params.hbar;
        packet.m_w = s.point.p_theta / cfg.params.hbar;
        InitialMoments im = initial_moments(packet, cfg.params);
        s.g = im.moments.g;
        r.packet_record = std::move(im);
    }
    r.state0 = s;
    r.horizon = cfg.T ? *cfg.T : default_horizon(s, cfg.params);
    if (!(r.horizon > 0.0)) throw std::invalid_argument("horizon T must be positive");
    return r;
}

inline ResolvedInput resolve_input(const RunConfig& cfg) { return resolve_input(cfg, cfg.a); }

// Inclusive uniform grid over [a_min, a_max] with a_steps points.
inline std::vector<double> sweep_grid(const RunConfig& cfg) {
    if (cfg.a_steps < 1) throw std::invalid_argument("sweep needs at least one grid point");
    if (cfg.a_steps == 1) return {cfg.a_min};
    if (!(cfg.a_max >= cfg.a_min)) throw std::invalid_argument("sweep grid needs a_max >= a_min");
    std::vector<double> grid(static_cast<std::size_t>(cfg.a_steps));
    for (int i = 0; i < cfg.a_steps; ++i) {
        grid[static_cast<std::size_t>(i)] =
            cfg.a_min + (cfg.a_max - cfg.a_min) * static_cast<double>(i) / static_cast<double>(cfg.a_steps - 1);
    }
    return grid;
}

} // namespace catenoid
