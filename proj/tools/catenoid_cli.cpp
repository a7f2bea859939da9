// Command-line front end for the catenoid moment-dynamics library:
// trajectory runs, launch-parameter sweeps, potential scans, initial-moment
// computation, and the self-verification suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "catenoid/config.hpp"
#include "catenoid/csv.hpp"
#include "catenoid/dynamics.hpp"
#include "catenoid/gaussian.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/verify.hpp"

namespace {

using catenoid::RunConfig;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    os << content;
    if (!os) throw std::invalid_argument("failed while writing: " + path);
}

// Plain-text configuration: one `key = value` per line, '#' starts a comment,
// keys are the long option names without the leading dashes.  Values feed
// through the option's own converter/validator; options already given on the
// command line keep their values (flags > file > defaults).
void apply_config_file(CLI::App& sub, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    auto trim = [](const std::string& s) {
        const char* ws = " \t\r\n";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto where = path + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trim(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        const std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        if (key.empty() || value.empty())
            throw std::invalid_argument(where + ": expected 'key = value'");
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw std::invalid_argument(where + ": unknown key '" + key + "' for subcommand '" +
                                        sub.get_name() + "'");
        if (opt->count() > 0) continue; // command-line value wins
        opt->add_result(value);
        opt->run_callback();
    }
}

std::string stem_of(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") return path.substr(0, path.size() - 4);
    return path;
}

json params_json(const catenoid::SystemParams& p) {
    return json{{"hbar", p.hbar}, {"mass", p.mass}, {"R", p.R}};
}

json point_json(const catenoid::PhasePoint& p) {
    return json{{"theta", p.theta}, {"p_theta", p.p_theta}, {"z", p.z}, {"p_z", p.p_z}};
}

json measure_json(const catenoid::InitialMoments& im) {
    json candidates = json::array();
    for (const auto& c : im.candidates) {
        candidates.push_back(json{{"measure", catenoid::measure_name(c.measure)},
                                  {"G0020", c.g0020},
                                  {"G0020_residual", c.g0020_residual},
                                  {"G0002", c.g0002},
                                  {"G0002_residual", c.g0002_residual},
                                  {"quad_error", c.quad_error},
                                  {"im_p_z", c.hermiticity_defect}});
    }
    return json{{"selected", catenoid::measure_name(im.selected)},
                {"within_tolerance", im.within_tolerance},
                {"reference_G0002", catenoid::kG0002Reference},
                {"candidates", candidates}};
}

json moments_json(const catenoid::MomentState& s) {
    static const char* names[10] = {"G1100", "G1010", "G1001", "G0110", "G0101",
                                    "G0011", "G2000", "G0200", "G0020", "G0002"};
    json m;
    for (int i = 0; i < 10; ++i) m[names[i]] = s.g[static_cast<std::size_t>(i)];
    return m;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg) {
    const catenoid::ResolvedInput in = catenoid::resolve_input(cfg);
    catenoid::IntegrateOptions opts;
    opts.sample_stride = cfg.stride;
    const catenoid::Trajectory traj = catenoid::integrate(in.state0, cfg.params, in.horizon,
                                                          in.source, cfg.abs_tol, cfg.rel_tol, opts);

    const std::string csv_path = cfg.out.empty() ? "trajectory.csv" : cfg.out;
    {
        std::ostringstream os;
        catenoid::write_trajectory_csv(os, traj);
        write_text_file(csv_path, os.str());
    }

    json summary;
    summary["command"] = "simulate";
    summary["params"] = params_json(cfg.params);
    summary["initial"] = json{{"point", point_json(in.state0.point)},
                              {"moments", moments_json(in.state0)},
                              {"classical", cfg.classical},
                              {"reproduce", cfg.reproduce_paper}};
    summary["run"] = json{{"rhs", catenoid::to_string(in.source)},
                          {"T", in.horizon},
                          {"abs_tol", cfg.abs_tol},
                          {"rel_tol", cfg.rel_tol},
                          {"stride", cfg.stride}};
    summary["integrator"] = json{{"status", catenoid::ode_status_name(traj.status)},
                                 {"t_reached", traj.t_reached()},
                                 {"n_accepted", traj.n_accepted},
                                 {"n_rejected", traj.n_rejected},
                                 {"message", traj.message}};

    std::string verdict = "Undetermined";
    try {
        const catenoid::Classification cls = catenoid::classify(traj);
        verdict = catenoid::verdict_name(cls.verdict);
        json cj{{"verdict", verdict},
                {"min_z", cls.min_z},
                {"max_excursion", cls.max_excursion}};
        if (cls.crossing_time)
            cj["crossing_time"] = *cls.crossing_time;
        else
            cj["crossing_time"] = nullptr;
        summary["classification"] = cj;
    } catch (const std::invalid_argument&) {
        summary["classification"] = nullptr;
        summary["classification_note"] = "launch is not classifiable (needs z0 > 0, p_z0 <= 0)";
    }
    if (!traj.completed() && !summary.contains("classification_note"))
        summary["classification_note"] = "integration ended early; classification reflects the partial trajectory";

    const catenoid::ConservedReport cons = catenoid::conserved_report(traj);
    summary["conservation"] = json{{"hq_drift", cons.hq_drift},
                                   {"p_theta_drift", cons.p_theta_drift},
                                   {"g0200_drift", cons.g0200_drift},
                                   {"theta_floor_violation", cons.theta_floor_violation},
                                   {"z_floor_violation", cons.z_floor_violation}};

    double min_ut = traj.samples.front().u_theta, min_uz = traj.samples.front().u_z;
    for (const auto& s : traj.samples) {
        min_ut = std::min(min_ut, s.u_theta);
        min_uz = std::min(min_uz, s.u_z);
    }
    summary["uncertainty"] = json{{"initial_u_theta", traj.samples.front().u_theta},
                                  {"initial_u_z", traj.samples.front().u_z},
                                  {"min_u_theta", min_ut},
                                  {"min_u_z", min_uz}};
    if (in.packet_record) summary["measure"] = measure_json(*in.packet_record);
    summary["outputs"] = json{{"trajectory_csv", csv_path}};

    const std::string summary_path = stem_of(csv_path) + "_summary.json";
    write_text_file(summary_path, summary.dump(2) + "\n");

    std::cout << "simulate: rhs=" << catenoid::to_string(in.source) << " T=" << in.horizon
              << " verdict=" << verdict << " t_reached=" << traj.t_reached()
              << " H_Q_drift=" << cons.hq_drift << '\n'
              << "wrote " << csv_path << " and " << summary_path << '\n';

    if (!traj.completed()) {
        std::cerr << "integration failed: " << traj.message << " (status "
                  << catenoid::ode_status_name(traj.status) << ", reached t=" << traj.t_reached()
                  << " of " << in.horizon << ")\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    const std::vector<double> grid = catenoid::sweep_grid(cfg);
    const std::string csv_path = cfg.out.empty() ? "sweep.csv" : cfg.out;
    const std::string frames_dir = stem_of(csv_path) + "_frames";
    std::filesystem::create_directories(frames_dir);

    std::ostringstream os;
    os << "a,verdict,crossing_time,min_z,max_excursion,hq_drift,p_theta_drift,g0200_drift,status\n";
    std::vector<double> failed;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = grid[i];
        const catenoid::ResolvedInput in = catenoid::resolve_input(cfg, a);
        catenoid::IntegrateOptions opts;
        opts.sample_stride = cfg.stride;
        const catenoid::Trajectory traj = catenoid::integrate(
            in.state0, cfg.params, in.horizon, in.source, cfg.abs_tol, cfg.rel_tol, opts);
        if (!traj.completed()) failed.push_back(a);

        std::string verdict = "Undetermined";
        std::string crossing;
        double min_z = traj.samples.front().state.point.z, max_exc = 0.0;
        try {
            const catenoid::Classification cls = catenoid::classify(traj);
            verdict = catenoid::verdict_name(cls.verdict);
            min_z = cls.min_z;
            max_exc = cls.max_excursion;
            if (cls.crossing_time) crossing = catenoid::format_g17(*cls.crossing_time);
        } catch (const std::invalid_argument&) {
            // unclassifiable launch; row keeps the Undetermined verdict
        }
        const catenoid::ConservedReport cons = catenoid::conserved_report(traj);
        os << catenoid::format_g17(a) << ',' << verdict << ',' << crossing << ','
           << catenoid::format_g17(min_z) << ',' << catenoid::format_g17(max_exc) << ','
           << catenoid::format_g17(cons.hq_drift) << ',' << catenoid::format_g17(cons.p_theta_drift)
           << ',' << catenoid::format_g17(cons.g0200_drift) << ','
           << catenoid::ode_status_name(traj.status) << '\n';

        char frame_name[32];
        std::snprintf(frame_name, sizeof(frame_name), "frame_%04zu.csv", i);
        std::ostringstream frame;
        catenoid::write_trajectory_csv(frame, traj);
        write_text_file(frames_dir + "/" + frame_name, frame.str());
    }
    write_text_file(csv_path, os.str());
    std::cout << "sweep: " << grid.size() << " grid points in [" << cfg.a_min << ", " << cfg.a_max
              << "], wrote " << csv_path << " and " << frames_dir << "/\n";
    if (!failed.empty()) {
        std::cerr << "integration failed at " << failed.size() << " grid point(s): a =";
        for (double a : failed) std::cerr << ' ' << a;
        std::cerr << " (rows record the reached state)\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_potential(const RunConfig& cfg) {
    if (cfg.z_samples < 2) throw std::invalid_argument("potential scan needs --z-samples >= 2");
    if (!(cfg.z_grid_max > cfg.z_grid_min))
        throw std::invalid_argument("potential scan needs z-grid-max > z-grid-min");
    if (cfg.at_time < 0.0) throw std::invalid_argument("--at-time must be >= 0");

    const catenoid::ResolvedInput in = catenoid::resolve_input(cfg);
    if (cfg.at_time > in.horizon)
        throw std::invalid_argument("--at-time " + std::to_string(cfg.at_time) +
                                    " is beyond the trajectory horizon T=" + std::to_string(in.horizon));
    catenoid::MomentState state_at = in.state0;
    if (cfg.at_time > 0.0) {
        const catenoid::Trajectory traj = catenoid::integrate(in.state0, cfg.params, cfg.at_time,
                                                              in.source, cfg.abs_tol, cfg.rel_tol);
        if (!traj.completed()) {
            std::cerr << "at_time " << cfg.at_time << " is beyond the trajectory: " << traj.message
                      << " (reached t=" << traj.t_reached() << ")\n";
            return kExitNumerical;
        }
        state_at = traj.samples.back().state;
    }

    std::ostringstream os;
    os << "z,V_class,V_eff\n";
    for (int i = 0; i < cfg.z_samples; ++i) {
        const double z = cfg.z_grid_min + (cfg.z_grid_max - cfg.z_grid_min) * static_cast<double>(i) /
                                              static_cast<double>(cfg.z_samples - 1);
        const double v_class = catenoid::effective_potential(z, in.state0, cfg.params, in.source);
        const double v_eff = catenoid::effective_potential(z, state_at, cfg.params, in.source);
        os << catenoid::format_g17(z) << ',' << catenoid::format_g17(v_class) << ','
           << catenoid::format_g17(v_eff) << '\n';
    }
    const std::string csv_path = cfg.out.empty() ? "potential.csv" : cfg.out;
    write_text_file(csv_path, os.str());
    std::cout << "potential: " << cfg.z_samples << " samples in [" << cfg.z_grid_min << ", "
              << cfg.z_grid_max << "] at t=" << cfg.at_time << ", wrote " << csv_path << '\n';
    return kExitOk;
}

int cmd_init_moments(const RunConfig& cfg) {
    catenoid::GaussianPacket packet;
    packet.theta0 = cfg.theta0;
    packet.z0 = cfg.z0;
    packet.lam = cfg.lam;
    packet.sigma_z = cfg.sigma_z;
    const catenoid::PhasePoint point = cfg.resolved_point();
    packet.l = point.p_z / cfg.params.hbar;
    packet.m_w = point.p_theta / cfg.params.hbar;

    const catenoid::InitialMoments im = catenoid::initial_moments(packet, cfg.params);

    json record;
    record["command"] = "init-moments";
    record["params"] = params_json(cfg.params);
    record["packet"] = json{{"theta0", packet.theta0}, {"z0", packet.z0},     {"lam", packet.lam},
                            {"sigma_z", packet.sigma_z}, {"l", packet.l},     {"m_w", packet.m_w}};
    record["point"] = point_json(im.moments.point);
    record["moments"] = moments_json(im.moments);
    record["uncertainty"] = json{{"u_theta", im.moments.uncertainty_theta()},
                                 {"u_z", im.moments.uncertainty_z()}};
    record["measure"] = measure_json(im);

    const std::string text = record.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(cfg.out, text);
        std::cout << "init-moments: selected measure " << catenoid::measure_name(im.selected)
                  << ", wrote " << cfg.out << '\n';
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    const catenoid::VerifyReport report = catenoid::run_verification(cfg.seed);
    const std::string text = report.text();
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(cfg.out, text);
        std::cout << "verify: " << (report.all_pass() ? "PASS" : "FAIL") << ", wrote " << cfg.out
                  << '\n';
    }
    return report.all_pass() ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical moment dynamics of a quantum particle on a catenoid"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string moments_text;
    std::string config_path;

    auto add_physics = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "key=value configuration file ('#' comments); flags override file values");
        sub->add_option("--hbar", cfg.params.hbar, "Planck constant")->capture_default_str();
        sub->add_option("--mass", cfg.params.mass, "particle mass")->capture_default_str();
        sub->add_option("--R", cfg.params.R, "throat radius")->capture_default_str();
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--seed", cfg.seed, "seed for verification sampling")->capture_default_str();
    };
    auto add_initial = [&](CLI::App* sub, bool with_pz) {
        sub->add_option("--a", cfg.a, "launch parameter: p_z0 = -a")->capture_default_str();
        if (with_pz) sub->add_option("--pz", cfg.pz, "explicit p_z0 (overrides --a)");
        sub->add_option("--theta0", cfg.theta0, "initial theta")->capture_default_str();
        sub->add_option("--ptheta", cfg.p_theta0, "initial p_theta")->capture_default_str();
        sub->add_option("--z0", cfg.z0, "initial z")->capture_default_str();
        sub->add_option("--lam", cfg.lam, "packet angular width parameter")->capture_default_str();
        sub->add_option("--sigma-z", cfg.sigma_z, "packet z width")->capture_default_str();
        sub->add_option("--moments", moments_text,
                        "explicit initial moments, 10 comma-separated values in the order "
                        "G1100,G1010,G1001,G0110,G0101,G0011,G2000,G0200,G0020,G0002");
        sub->add_flag("--reproduce-paper", cfg.reproduce_paper,
                      "use the tabulated reference moments and default to the transcribed system");
        sub->add_flag("--classical", cfg.classical, "zero-moment (classical) run");
    };
    auto add_run = [&](CLI::App* sub) {
        sub->add_option("--rhs", cfg.rhs, "equation system: generated | transcribed")
            ->check(CLI::IsMember({"generated", "transcribed"}));
        sub->add_option("--T", cfg.T, "integration horizon (default: classical path-length rule)");
        sub->add_option("--abs-tol", cfg.abs_tol, "absolute tolerance")->capture_default_str();
        sub->add_option("--rel-tol", cfg.rel_tol, "relative tolerance")->capture_default_str();
        sub->add_option("--stride", cfg.stride, "record every n-th accepted step")->capture_default_str();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory, write CSV + JSON summary");
    add_physics(simulate);
    add_initial(simulate, true);
    add_run(simulate);

    CLI::App* sweep = app.add_subcommand("sweep", "classify runs over a grid of launch parameters");
    add_physics(sweep);
    add_initial(sweep, false);
    add_run(sweep);
    sweep->add_option("--a-min", cfg.a_min, "grid start")->capture_default_str();
    sweep->add_option("--a-max", cfg.a_max, "grid end (inclusive)")->capture_default_str();
    sweep->add_option("--a-steps", cfg.a_steps, "number of grid points")->capture_default_str();

    CLI::App* potential = app.add_subcommand("potential", "scan V_class and V_eff over a z grid");
    add_physics(potential);
    add_initial(potential, true);
    add_run(potential);
    potential->add_option("--z-grid-min", cfg.z_grid_min, "scan start")->capture_default_str();
    potential->add_option("--z-grid-max", cfg.z_grid_max, "scan end")->capture_default_str();
    potential->add_option("--z-samples", cfg.z_samples, "number of scan points")->capture_default_str();
    potential->add_option("--at-time", cfg.at_time, "evaluate V_eff from the state at this time")
        ->capture_default_str();

    CLI::App* init_moments = app.add_subcommand("init-moments", "compute initial moments, write JSON record");
    add_physics(init_moments);
    add_initial(init_moments, true);

    CLI::App* verify = app.add_subcommand("verify", "run the self-verification suite");
    add_physics(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!config_path.empty()) apply_config_file(*app.get_subcommands().front(), config_path);
        if (!moments_text.empty()) cfg.moments = catenoid::parse_moment_list(moments_text);
        cfg.params.validate();
        if (app.got_subcommand(simulate)) return cmd_simulate(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        if (app.got_subcommand(potential)) return cmd_potential(cfg);
        if (app.got_subcommand(init_moments)) return cmd_init_moments(cfg);
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
    } catch (const catenoid::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const CLI::Error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
