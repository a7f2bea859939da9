#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catenoid/canonical.hpp"
#include "catenoid/derivative_poly.hpp"
#include "catenoid/dynamics.hpp"
#include "catenoid/eom.hpp"
#include "catenoid/gaussian.hpp"
#include "catenoid/hamiltonian.hpp"
#include "catenoid/moment_bracket.hpp"
#include "catenoid/reference/weyl_commutator.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

// One titled block of the verification report.  Normative checks decide the
// exit status; informational lines document expected discrepancies without
// ever failing the run.
struct VerifySection {
    std::string title;
    std::vector<std::string> lines;
    int normative_checks = 0;
    int normative_failures = 0;

    void check(bool ok, const std::string& what) {
        ++normative_checks;
        if (!ok) ++normative_failures;
        lines.push_back(std::string(ok ? "[PASS] " : "[FAIL] ") + what);
    }
    void note(const std::string& what) { lines.push_back("[info] " + what); }
};

struct VerifyReport {
    unsigned long long seed = 0;
    std::vector<VerifySection> sections;

    bool all_pass() const {
        for (const auto& s : sections)
            if (s.normative_failures > 0) return false;
        return true;
    }

    std::string text() const {
        std::ostringstream os;
        os << "verification report (seed " << seed << ")\n";
        int checks = 0, failures = 0;
        for (const auto& s : sections) {
            os << "\n== " << s.title << " ==\n";
            for (const auto& l : s.lines) os << l << '\n';
            checks += s.normative_checks;
            failures += s.normative_failures;
        }
        os << "\n== summary ==\n"
           << "normative checks: " << checks << ", failures: " << failures << '\n'
           << "RESULT: " << (failures == 0 ? "PASS" : "FAIL") << '\n';
        return os.str();
    }
};

namespace verify_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<MomentIndex> indices_up_to(int max_order, int min_order = 1) {
    std::vector<MomentIndex> v;
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; a + b <= max_order; ++b)
            for (int c = 0; a + b + c <= max_order; ++c)
                for (int d = 0; a + b + c + d <= max_order; ++d)
                    if (a + b + c + d >= min_order) v.emplace_back(a, b, c, d);
    return v;
}

// {sum_k c_k G^{F_k}, G^rhs} for a combination whose terms are single
// order-2 moments with no hbar grade (the order-2 closure guarantees this).
inline MomentCombination bracket_with_combination(const MomentCombination& comb,
                                                  const MomentIndex& rhs) {
    MomentCombination out;
    for (const auto& [key, coeff] : comb.terms()) {
        if (key.factors.empty()) continue; // constants commute
        out += moment_bracket(key.factors[0], rhs, 2).scaled(coeff);
    }
    return out;
}

inline MomentState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI), mom(-10.0, 10.0), pos(-2.0, 2.0),
        pure(0.0, 2.0), mixed(-1.0, 1.0);
    MomentState s;
    s.point = PhasePoint(angle(rng), mom(rng), pos(rng), mom(rng));
    for (int i = 0; i < 6; ++i) s.g[static_cast<std::size_t>(i)] = mixed(rng);
    for (int i = 6; i < 10; ++i) s.g[static_cast<std::size_t>(i)] = pure(rng);
    return s;
}

inline const char* component_name(int i) {
    static const char* names[14] = {"theta_dot", "p_theta_dot", "z_dot",     "p_z_dot",
                                    "dG1100",    "dG1010",      "dG1001",    "dG0110",
                                    "dG0101",    "dG0011",      "dG2000",    "dG0200",
                                    "dG0020",    "dG0002"};
    return names[i];
}

inline std::array<double, 14> rhs_as_array(const MomentState& d) {
    std::array<double, 14> y{};
    y[0] = d.point.theta;
    y[1] = d.point.p_theta;
    y[2] = d.point.z;
    y[3] = d.point.p_z;
    for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(4 + i)] = d.g[static_cast<std::size_t>(i)];
    return y;
}

inline VerifySection section_brackets() {
    VerifySection sec{"moment bracket engine"};

    // Antisymmetry, exhaustive over index pairs of order <= 4.
    {
        const auto idx = indices_up_to(4);
        long pairs = 0, bad = 0;
        for (const auto& i1 : idx)
            for (const auto& i2 : idx) {
                const int full = i1.order() + i2.order();
                if (!(moment_bracket(i1, i2, full) == -moment_bracket(i2, i1, full))) ++bad;
                ++pairs;
            }
        sec.check(bad == 0, "antisymmetry holds for all " + std::to_string(pairs) +
                                " index pairs of order <= 4");
    }

    // Jacobi identity, exactly zero on the order-2 subalgebra.
    {
        const auto& order2 = MomentState::moment_layout();
        long triples = 0, bad = 0;
        for (std::size_t i = 0; i < order2.size(); ++i)
            for (std::size_t j = i; j < order2.size(); ++j)
                for (std::size_t k = j; k < order2.size(); ++k) {
                    const MomentIndex &x = order2[i], &y = order2[j], &z = order2[k];
                    MomentCombination jac =
                        bracket_with_combination(moment_bracket(x, y, 2), z) +
                        bracket_with_combination(moment_bracket(y, z, 2), x) +
                        bracket_with_combination(moment_bracket(z, x, 2), y);
                    if (!jac.is_zero()) ++bad;
                    ++triples;
                }
        sec.check(bad == 0, "Jacobi identity exactly zero on all " + std::to_string(triples) +
                                " order-2 triples");
    }

    // Term-for-term agreement with the independent operator-level oracle.
    {
        const auto idx = indices_up_to(3);
        long pairs = 0, bad = 0;
        for (const auto& i1 : idx)
            for (const auto& i2 : idx) {
                const int full = i1.order() + i2.order();
                if (!(moment_bracket(i1, i2, full) == reference::oracle_moment_bracket(i1, i2)))
                    ++bad;
                ++pairs;
            }
        sec.check(bad == 0, "commutator oracle matches term-for-term on all " +
                                std::to_string(pairs) + " pairs of order <= 3");
    }
    return sec;
}

inline VerifySection section_hq_sources(unsigned long long seed) {
    VerifySection sec{"generated vs transcribed effective Hamiltonian"};
    const SystemParams params;
    const HqExpression& gen = hq_expression(HqSource::Generated);
    const HqExpression& tra = hq_expression(HqSource::Transcribed);

    // Structural term table over the union of moment coefficients.
    std::vector<MomentIndex> keys;
    for (const auto& [idx, expr] : gen.moment_coeffs) keys.push_back(idx);
    for (const auto& [idx, expr] : tra.moment_coeffs)
        if (gen.moment_coeffs.find(idx) == gen.moment_coeffs.end()) keys.push_back(idx);
    int differing = 0;
    for (const MomentIndex& idx : keys) {
        auto git = gen.moment_coeffs.find(idx);
        auto tit = tra.moment_coeffs.find(idx);
        const std::string gs = git == gen.moment_coeffs.end() ? "0" : git->second.str();
        const std::string ts = tit == tra.moment_coeffs.end() ? "0" : tit->second.str();
        const bool same = gs == ts;
        if (!same) ++differing;
        std::ostringstream os;
        os << "coefficient of G^{" << idx.a << ',' << idx.b << ',' << idx.c << ',' << idx.d
           << "}: " << (same ? "identical" : "DIFFERS") << "; generated = " << gs
           << "; transcribed = " << ts;
        sec.note(os.str());
    }
    sec.note("differing coefficients: " + std::to_string(differing) +
             " (p_theta power on G^{0,1,1,0}; factor 2 on G^{0,2,0,0}, G^{0,0,0,2}, G^{0,0,2,0})");

    // Numeric comparison at seeded random states.
    std::mt19937_64 rng(seed);
    double max_h_consistency = 0.0, max_h_gap = 0.0;
    std::array<double, 14> max_rhs_gap{};
    std::array<double, 14> max_verbatim_gap{};
    std::array<double, 14> max_component{};
    const int n_states = 100;
    for (int k = 0; k < n_states; ++k) {
        const MomentState s = random_state(rng);
        for (HqSource src : {HqSource::Generated, HqSource::Transcribed}) {
            const double sym = hq_expression(src).evaluate(s, params);
            const double closed = effective_hamiltonian(s, params, src);
            const double scale = std::max(std::abs(closed), 1.0);
            max_h_consistency = std::max(max_h_consistency, std::abs(sym - closed) / scale);
        }
        max_h_gap = std::max(max_h_gap, std::abs(effective_hamiltonian(s, params, HqSource::Generated) -
                                                 effective_hamiltonian(s, params, HqSource::Transcribed)));
        const auto rg = rhs_as_array(eom_rhs_generated(s, params));
        const auto rt = rhs_as_array(eom_rhs_transcribed(s, params));
        const auto rv = rhs_as_array(eom_rhs_transcribed_verbatim(s, params));
        for (int i = 0; i < 14; ++i) {
            max_rhs_gap[static_cast<std::size_t>(i)] =
                std::max(max_rhs_gap[static_cast<std::size_t>(i)],
                         std::abs(rg[static_cast<std::size_t>(i)] - rt[static_cast<std::size_t>(i)]));
            max_verbatim_gap[static_cast<std::size_t>(i)] =
                std::max(max_verbatim_gap[static_cast<std::size_t>(i)],
                         std::abs(rv[static_cast<std::size_t>(i)] - rt[static_cast<std::size_t>(i)]));
            max_component[static_cast<std::size_t>(i)] =
                std::max(max_component[static_cast<std::size_t>(i)], std::abs(rt[static_cast<std::size_t>(i)]));
        }
    }
    sec.check(max_h_consistency < 1e-12,
              "symbolic H_Q equals the closed form for both sources at " +
                  std::to_string(n_states) + " random states (max rel " + fmt(max_h_consistency) + ")");
    sec.note("max |H_generated - H_transcribed| over random states: " + fmt(max_h_gap) +
             " (expected nonzero; report only)");
    for (int i = 0; i < 14; ++i) {
        if (max_rhs_gap[static_cast<std::size_t>(i)] > 0.0)
            sec.note(std::string("rhs diff generated vs transcribed, ") + component_name(i) +
                     ": max " + fmt(max_rhs_gap[static_cast<std::size_t>(i)]));
    }
    // The verbatim transcribed rows versus the Hamiltonian flow of the
    // transcribed H_Q: three rows are known to differ in the transcription.
    // A relative threshold separates genuine row differences from
    // evaluation-order floating-point noise.
    auto verbatim_differs = [&](int i) {
        const std::size_t si = static_cast<std::size_t>(i);
        return max_verbatim_gap[si] > 1e-9 * std::max(max_component[si], 1.0);
    };
    int verbatim_rows = 0;
    for (int i = 0; i < 14; ++i)
        if (verbatim_differs(i)) ++verbatim_rows;
    std::ostringstream vb;
    vb << "verbatim equation set vs transcribed flow: " << verbatim_rows
       << " rows differ (z_dot scaling; dG0110 p_z power; dG2000 leading factor):";
    for (int i = 0; i < 14; ++i)
        if (verbatim_differs(i))
            vb << ' ' << component_name(i) << " (max " << fmt(max_verbatim_gap[static_cast<std::size_t>(i)]) << ')';
    sec.note(vb.str());
    return sec;
}

inline VerifySection section_derivative_polys() {
    VerifySection sec{"derivative polynomials of sech^2"};

    // Central finite differences with Richardson extrapolation in extended
    // precision, compared against the recurrence construction.
    auto fd = [](int n, double x) {
        auto stencil = [&](long double h) {
            long double acc = 0.0L;
            for (int k = 0; k <= n; ++k) {
                const long double xk = static_cast<long double>(x) + (n * 0.5L - k) * h;
                const long double c = std::cosh(xk);
                const long double f = 1.0L / (c * c);
                const long double w = static_cast<long double>(binomial(n, k));
                acc += ((k % 2 == 0) ? w : -w) * f;
            }
            long double hn = 1.0L;
            for (int i = 0; i < n; ++i) hn *= h;
            return acc / hn;
        };
        const long double h = 0.05L;
        const long double d1 = stencil(h), d2 = stencil(h / 2), d3 = stencil(h / 4);
        const long double r1 = (4.0L * d2 - d1) / 3.0L;
        const long double r2 = (4.0L * d3 - d2) / 3.0L;
        return static_cast<double>((16.0L * r2 - r1) / 15.0L);
    };

    double worst = 0.0;
    bool ok = true;
    for (int n = 0; n <= 6; ++n) {
        const DerivPoly q = derivative_polynomial(n);
        for (double x : {0.0, 0.3, 1.0, 2.0}) {
            const double s = 1.0 / std::cosh(x);
            const double exact = s * s * q.evaluate(std::tanh(x));
            const double approx = fd(n, x);
            if (std::abs(exact) > 1e-12) {
                const double rel = std::abs(approx - exact) / std::abs(exact);
                worst = std::max(worst, rel);
                ok = ok && rel < 1e-6;
            } else {
                ok = ok && std::abs(approx - exact) < 1e-9;
            }
        }
    }
    sec.check(ok, "recurrence matches finite differences for n <= 6 at four abscissae (worst rel " +
                      fmt(worst) + ")");

    for (int n = 0; n <= 6; ++n) {
        const DerivPolyRelation rel = compare_derivative_polynomial_forms(n);
        const char* what = rel == DerivPolyRelation::Equal        ? "equal"
                           : rel == DerivPolyRelation::SignFlipped ? "SIGN-FLIPPED"
                                                                   : "DIFFERS";
        sec.note("closed form vs recurrence at n=" + std::to_string(n) + ": " + what +
                 (rel == DerivPolyRelation::SignFlipped ? " (report only)" : ""));
    }
    return sec;
}

inline VerifySection section_canonical(unsigned long long seed) {
    VerifySection sec{"canonical transformation"};
    const SystemParams params;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI), mom(-10.0, 10.0), pos(-2.0, 2.0);

    double max_k_rel = 0.0, max_symp = 0.0;
    const int n_points = 1000;
    for (int k = 0; k < n_points; ++k) {
        const PhasePoint p(angle(rng), mom(rng), pos(rng), mom(rng));

        // K(T(x)) == H(x)
        const double H = classical_hamiltonian(p, params);
        const double K = kamiltonian(canonical_transform(p, params), params);
        max_k_rel = std::max(max_k_rel, std::abs(K - H) / std::max(std::abs(H), 1e-30));

        // Symplectic Jacobian in extended precision (double-precision
        // differencing hits the 1e-10 bound from roundoff alone).
        const long double h = 1e-4L;
        std::array<long double, 4> x{static_cast<long double>(p.theta),
                                     static_cast<long double>(p.p_theta),
                                     static_cast<long double>(p.z),
                                     static_cast<long double>(p.p_z)};
        long double J[4][4];
        for (int j = 0; j < 4; ++j) {
            auto shifted = [&](long double dd) {
                std::array<long double, 4> xs = x;
                xs[static_cast<std::size_t>(j)] += dd;
                return canonical_map<long double>(xs[0], xs[1], xs[2], xs[3],
                                                  static_cast<long double>(params.R));
            };
            const auto fp = shifted(h), fm = shifted(-h), fp2 = shifted(2 * h), fm2 = shifted(-2 * h);
            for (int i = 0; i < 4; ++i) {
                const std::size_t si = static_cast<std::size_t>(i);
                J[i][j] = (8.0L * (fp[si] - fm[si]) - (fp2[si] - fm2[si])) / (12.0L * h);
            }
        }
        // Omega in the (Q1, P1, Q2, P2) ordering.
        const long double Om[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                long double acc = 0.0L;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) acc += J[i][r] * Om[i][j] * J[j][c];
                max_symp = std::max(max_symp, static_cast<double>(std::abs(acc - Om[r][c])));
            }
    }
    sec.check(max_k_rel < 1e-12, "K composed with the map equals H at " + std::to_string(n_points) +
                                     " seeded points (max rel " + fmt(max_k_rel) + ")");
    sec.check(max_symp < 1e-10, "max |J^T Omega J - Omega| = " + fmt(max_symp) + " < 1e-10 over " +
                                    std::to_string(n_points) + " seeded points");
    return sec;
}

inline VerifySection section_measures() {
    VerifySection sec{"initial-moment quadrature and measure conventions"};
    const SystemParams params;
    const GaussianPacket packet = packet_from_paper_defaults(1.0).first;

    sec.check(std::abs(gaussian_g2000(packet.lam) - 0.05) < 1e-12,
              "closed form G^{2,0,0,0} = 0.05 to 1e-12");
    sec.check(gaussian_g0200(packet.lam, params.hbar) == 5.0, "closed form G^{0,2,0,0} = 5 exactly");
    sec.check(std::abs(gaussian_g0020(packet.sigma_z, params.R) - 0.06) < 1e-15,
              "closed form G^{0,0,2,0} = 0.06");

    InitialMoments im;
    try {
        im = initial_moments(packet, params);
    } catch (const QuadratureError& e) {
        sec.check(false, std::string("quadrature convergence: ") + e.what());
        return sec;
    }
    sec.check(true, "quadrature converged under all three measure conventions");

    // Internal consistency: the cosh-measure z variance must land on the
    // closed form (it does so identically in exact arithmetic).
    double cosh_g0020_residual = 1.0;
    for (const auto& c : im.candidates)
        if (c.measure == MeasureConvention::Cosh) cosh_g0020_residual = c.g0020_residual;
    sec.check(cosh_g0020_residual < 1e-7,
              "cosh-measure z variance reproduces the closed form (rel " + fmt(cosh_g0020_residual) + ")");

    // Stability under domain doubling beyond 10 sigma.
    InitialMomentsOptions narrow, wide;
    narrow.domain_half_width_sigmas = 10.0;
    wide.domain_half_width_sigmas = 20.0;
    const InitialMoments a = initial_moments(packet, params, narrow);
    const InitialMoments b = initial_moments(packet, params, wide);
    double max_drift = 0.0;
    for (int i = 0; i < 3; ++i)
        max_drift = std::max(max_drift, std::abs(a.candidates[static_cast<std::size_t>(i)].g0002 -
                                                 b.candidates[static_cast<std::size_t>(i)].g0002));
    sec.check(max_drift < 1e-9,
              "G^{0,0,0,2} stable to 1e-9 under domain doubling (max drift " + fmt(max_drift) + ")");

    for (const auto& c : im.candidates) {
        std::ostringstream os;
        os << "measure " << measure_name(c.measure) << ": G0020 = " << fmt(c.g0020)
           << " (rel residual " << fmt(c.g0020_residual) << "), G0002 = " << fmt(c.g0002)
           << " (rel residual vs " << fmt(kG0002Reference) << ": " << fmt(c.g0002_residual)
           << "), Im<P_z> = " << fmt(c.hermiticity_defect);
        sec.note(os.str());
    }
    sec.note(std::string("selected measure: ") + measure_name(im.selected));
    if (im.within_tolerance) {
        sec.note("selected G^{0,0,0,2} is within 1e-3 relative of the reference value");
    } else {
        double best = im.candidates[0].g0002_residual;
        for (const auto& c : im.candidates) best = std::min(best, c.g0002_residual);
        sec.note("NO convention reaches the reference value to 1e-3 relative; closest residual " +
                 fmt(best) + " (" + measure_name(im.selected) +
                 ", value " + fmt(im.moments.g[9]) + "); reported, not asserted");
    }
    return sec;
}

} // namespace verify_detail

// The full verification suite.  The seed fixes every random sample, so the
// report text is identical across runs with the same seed.
inline VerifyReport run_verification(unsigned long long seed = 12345) {
    VerifyReport report;
    report.seed = seed;
    report.sections.push_back(verify_detail::section_brackets());
    report.sections.push_back(verify_detail::section_hq_sources(seed));
    report.sections.push_back(verify_detail::section_derivative_polys());
    report.sections.push_back(verify_detail::section_canonical(seed + 1));
    report.sections.push_back(verify_detail::section_measures());
    return report;
}

} // namespace catenoid
