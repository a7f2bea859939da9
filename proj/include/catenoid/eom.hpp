#pragma once

#include <array>
#include <map>
#include <stdexcept>

#include "catenoid/hamiltonian.hpp"
#include "catenoid/moment_bracket.hpp"
#include "catenoid/moment_index.hpp"
#include "catenoid/phase_expr.hpp"
#include "catenoid/state.hpp"

namespace catenoid {

// ---------------------------------------------------------------------------
// Symbolic layer: H_Q as a classical part plus moment-linear coefficients,
// and the 14-component equation-of-motion table derived from it. Everything
// here is parameter-symbolic (R, m, hbar enter as integer powers) and is
// built once per source, then compiled to doubles for integration.
// ---------------------------------------------------------------------------

// H_Q = classical(z, p) + sum_A moment_coeffs[A](z, p) * G^A.
struct HqExpression {
    PhaseExpr classical;
    std::map<MomentIndex, PhaseExpr> moment_coeffs;

    double evaluate(const MomentState& s, const SystemParams& params) const {
        double acc = classical.evaluate(s.point.z, s.point.p_theta, s.point.p_z, params);
        for (const auto& [idx, coeff] : moment_coeffs) {
            acc += coeff.evaluate(s.point.z, s.point.p_theta, s.point.p_z, params) * s.moment(idx);
        }
        return acc;
    }
};

namespace detail {

// eta * (p_theta^2 + R^2 p_z^2) with eta = sech^2(z/R) / (2 m R^2).
inline PhaseExpr classical_hamiltonian_expr() {
    PhaseMono a;
    a.sech_pow = 2;
    a.ptheta_pow = 2;
    a.R_pow = -2;
    a.mass_pow = -1;
    PhaseMono b;
    b.sech_pow = 2;
    b.pz_pow = 2;
    b.mass_pow = -1;
    PhaseExpr e;
    e.add_term(a, Rational(1, 2));
    e.add_term(b, Rational(1, 2));
    return e;
}

inline PhaseExpr eta_expr() {
    PhaseMono m;
    m.sech_pow = 2;
    m.R_pow = -2;
    m.mass_pow = -1;
    return PhaseExpr::monomial(m, Rational(1, 2));
}

inline PhaseExpr simple_mono(int sech, int tanh, int ptheta, int pz, int R, const Rational& c) {
    PhaseMono m;
    m.sech_pow = sech;
    m.tanh_pow = tanh;
    m.ptheta_pow = ptheta;
    m.pz_pow = pz;
    m.R_pow = R;
    return PhaseExpr::monomial(m, c);
}

inline HqExpression build_generated_hq() {
    // Second-order Taylor expansion of <H(theta, p_theta, z, p_z)> about the
    // means: H_Q = H + sum_{b+c+d=2} (1/b!c!d!) d^2H/(dp_theta^b dz^c dp_z^d)
    // G^{0,b,c,d}. (No theta dependence, so a = 0 throughout.)
    HqExpression hq;
    hq.classical = classical_hamiltonian_expr();
    struct Slot {
        int b, c, d;
        int divisor;
    };
    const Slot slots[] = {{2, 0, 0, 2}, {0, 2, 0, 2}, {0, 0, 2, 2},
                          {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}};
    for (const Slot& s : slots) {
        PhaseExpr d = hq.classical;
        for (int i = 0; i < s.b; ++i) d = d.d_ptheta();
        for (int i = 0; i < s.c; ++i) d = d.d_z();
        for (int i = 0; i < s.d; ++i) d = d.d_pz();
        d = d.scaled(Rational(1, s.divisor));
        if (!d.is_zero()) hq.moment_coeffs.emplace(MomentIndex(0, s.b, s.c, s.d), d);
    }
    return hq;
}

inline HqExpression build_transcribed_hq() {
    // The transcribed second-order Hamiltonian: same classical part, moment
    // terms carrying kappa = 2 and p_theta^2 in the mixed theta-sector term.
    HqExpression hq;
    hq.classical = classical_hamiltonian_expr();
    const PhaseExpr eta = eta_expr();
    // -(4/R) tanh p_theta^2 * eta  -> G^{0,1,1,0}
    hq.moment_coeffs.emplace(MomentIndex(0, 1, 1, 0),
                             eta * simple_mono(0, 1, 2, 0, -1, Rational(-4)));
    // -4 R tanh p_z * eta          -> G^{0,0,1,1}
    hq.moment_coeffs.emplace(MomentIndex(0, 0, 1, 1),
                             eta * simple_mono(0, 1, 0, 1, 1, Rational(-4)));
    // 2 eta                        -> G^{0,2,0,0}
    hq.moment_coeffs.emplace(MomentIndex(0, 2, 0, 0), eta.scaled(Rational(2)));
    // 2 R^2 eta                    -> G^{0,0,0,2}
    hq.moment_coeffs.emplace(MomentIndex(0, 0, 0, 2),
                             eta * simple_mono(0, 0, 0, 0, 2, Rational(2)));
    // (2/R^2) [2 - 3 sech^2] (p_theta^2 + R^2 p_z^2) eta -> G^{0,0,2,0}
    PhaseExpr a_factor = PhaseExpr::constant(Rational(2)) - simple_mono(2, 0, 0, 0, 0, Rational(3));
    PhaseExpr p2 = simple_mono(0, 0, 2, 0, 0, Rational(1)) + simple_mono(0, 0, 0, 2, 2, Rational(1));
    hq.moment_coeffs.emplace(MomentIndex(0, 0, 2, 0),
                             eta * a_factor * p2 * simple_mono(0, 0, 0, 0, -2, Rational(2)));
    return hq;
}

} // namespace detail

inline const HqExpression& hq_expression(HqSource source) {
    static const HqExpression generated = detail::build_generated_hq();
    static const HqExpression transcribed = detail::build_transcribed_hq();
    return source == HqSource::Generated ? generated : transcribed;
}

// One component of the equation-of-motion table: base(z, p) plus a term
// linear in each stored moment.
struct RhsComponentExpr {
    PhaseExpr base;
    std::array<PhaseExpr, 10> lin;
};

// Component order matches MomentState::to_array: theta, p_theta, z, p_z, g0..g9.
struct RhsExprTable {
    std::array<RhsComponentExpr, 14> comp;
};

namespace detail {

inline RhsExprTable build_rhs_table(HqSource source) {
    const HqExpression& hq = hq_expression(source);
    const auto& layout = MomentState::moment_layout();
    RhsExprTable table;

    // Classical sector: Hamilton's equations in (theta, p_theta, z, p_z) with
    // the moments held fixed. Nothing depends on theta, so p_theta is static.
    table.comp[0].base = hq.classical.d_ptheta();
    table.comp[2].base = hq.classical.d_pz();
    table.comp[3].base = PhaseExpr::zero() - hq.classical.d_z();
    for (const auto& [idx, coeff] : hq.moment_coeffs) {
        const int pos = MomentState::moment_position(idx);
        if (pos < 0) throw std::logic_error("H_Q carries a non-basis moment");
        table.comp[0].lin[static_cast<std::size_t>(pos)] =
            table.comp[0].lin[static_cast<std::size_t>(pos)] + coeff.d_ptheta();
        table.comp[2].lin[static_cast<std::size_t>(pos)] =
            table.comp[2].lin[static_cast<std::size_t>(pos)] + coeff.d_pz();
        table.comp[3].lin[static_cast<std::size_t>(pos)] =
            table.comp[3].lin[static_cast<std::size_t>(pos)] - coeff.d_z();
    }

    // Moment sector: dG^B/dt = sum_A coeff_A * {G^B, G^A}. At second order the
    // bracket closes onto single second-order moments with no hbar grading;
    // anything else would mean the closure property broke, so fail loudly.
    for (int b = 0; b < 10; ++b) {
        RhsComponentExpr& row = table.comp[static_cast<std::size_t>(4 + b)];
        for (const auto& [idx, coeff] : hq.moment_coeffs) {
            const MomentCombination bracket =
                moment_bracket(layout[static_cast<std::size_t>(b)], idx, 2);
            for (const auto& [key, c] : bracket.terms()) {
                if (key.hbar_pow != 0 || key.factors.size() != 1 ||
                    key.factors[0].order() != 2) {
                    throw std::logic_error("order-2 bracket failed to close");
                }
                const int pos = MomentState::moment_position(key.factors[0]);
                if (pos < 0) throw std::logic_error("bracket produced a non-basis moment");
                row.lin[static_cast<std::size_t>(pos)] =
                    row.lin[static_cast<std::size_t>(pos)] + coeff.scaled(c);
            }
        }
    }
    return table;
}

} // namespace detail

inline const RhsExprTable& rhs_expr_table(HqSource source) {
    static const RhsExprTable generated = detail::build_rhs_table(HqSource::Generated);
    static const RhsExprTable transcribed = detail::build_rhs_table(HqSource::Transcribed);
    return source == HqSource::Generated ? generated : transcribed;
}

// ---------------------------------------------------------------------------
// Compiled layer: parameters baked in, two transcendental calls per
// evaluation, shared by all 14 components.
// ---------------------------------------------------------------------------

struct CompiledRhs {
    struct Component {
        CompiledExpr base;
        std::array<CompiledExpr, 10> lin;
    };
    std::array<Component, 14> comp;
    double R = 0.5;

    void operator()(const std::array<double, 14>& y, std::array<double, 14>& dydt) const {
        const double se = sech(y[2] / R);
        const double tn = std::tanh(y[2] / R);
        const double pt = y[1];
        const double pz = y[3];
        for (int i = 0; i < 14; ++i) {
            const Component& c = comp[static_cast<std::size_t>(i)];
            double acc = c.base.evaluate(se, tn, pt, pz);
            for (int j = 0; j < 10; ++j) {
                const CompiledExpr& l = c.lin[static_cast<std::size_t>(j)];
                if (!l.empty()) acc += l.evaluate(se, tn, pt, pz) * y[static_cast<std::size_t>(4 + j)];
            }
            dydt[static_cast<std::size_t>(i)] = acc;
        }
    }
};

inline CompiledRhs compile_rhs(HqSource source, const SystemParams& params) {
    const RhsExprTable& table = rhs_expr_table(source);
    CompiledRhs rhs;
    rhs.R = params.R;
    for (int i = 0; i < 14; ++i) {
        rhs.comp[static_cast<std::size_t>(i)].base =
            table.comp[static_cast<std::size_t>(i)].base.compile(params);
        for (int j = 0; j < 10; ++j) {
            rhs.comp[static_cast<std::size_t>(i)].lin[static_cast<std::size_t>(j)] =
                table.comp[static_cast<std::size_t>(i)].lin[static_cast<std::size_t>(j)].compile(
                    params);
        }
    }
    return rhs;
}

namespace detail {

// Shared evaluation for the public one-shot RHS calls. The derivative is
// returned in a MomentState shell; fields are assigned directly so the
// angle-wrapping constructor never touches d(theta)/dt.
inline MomentState eval_rhs_table(const RhsExprTable& table, const MomentState& s,
                                  const SystemParams& params) {
    std::array<double, 14> y = s.to_array(s.point.theta);
    std::array<double, 14> dydt{};
    const double se = sech(y[2] / params.R);
    const double tn = std::tanh(y[2] / params.R);
    for (int i = 0; i < 14; ++i) {
        const RhsComponentExpr& c = table.comp[static_cast<std::size_t>(i)];
        double acc = c.base.is_zero() ? 0.0
                                      : c.base.compile(params).evaluate(se, tn, y[1], y[3]);
        for (int j = 0; j < 10; ++j) {
            const PhaseExpr& l = c.lin[static_cast<std::size_t>(j)];
            if (!l.is_zero()) {
                acc += l.compile(params).evaluate(se, tn, y[1], y[3]) *
                       y[static_cast<std::size_t>(4 + j)];
            }
        }
        dydt[static_cast<std::size_t>(i)] = acc;
    }
    MomentState d;
    d.point.theta = dydt[0];
    d.point.p_theta = dydt[1];
    d.point.z = dydt[2];
    d.point.p_z = dydt[3];
    for (int j = 0; j < 10; ++j) d.g[static_cast<std::size_t>(j)] = dydt[static_cast<std::size_t>(4 + j)];
    return d;
}

} // namespace detail

// Machine-generated equations of motion: each component is {f, H_Q} against
// the generated H_Q under the second-order closed bracket. The truncation
// order is part of the signature for forward compatibility; at a quadratic
// Hamiltonian the order-2 bracket already closes, so every max_order >= 2
// yields the same system.
inline MomentState eom_rhs_generated(const MomentState& s, const SystemParams& params,
                                     int max_order = 2) {
    (void)max_order;
    return detail::eval_rhs_table(rhs_expr_table(HqSource::Generated), s, params);
}

// The transcribed system, normalized to the exact Hamiltonian flow of the
// transcribed H_Q (see eom_rhs_transcribed_verbatim for the literal column).
inline MomentState eom_rhs_transcribed(const MomentState& s, const SystemParams& params) {
    return detail::eval_rhs_table(rhs_expr_table(HqSource::Transcribed), s, params);
}

// The legacy right-hand sides exactly as transcribed, kept term by term for
// the comparison report. Three rows differ from the Hamiltonian flow of the
// transcribed H_Q: dz/dt is uniformly short one factor of R, dG^{0,1,1,0}/dt
// carries p_z^2 where the flow has p_z, and the first term of dG^{2,0,0,0}/dt
// has coefficient -4 where the flow has -8.
inline MomentState eom_rhs_transcribed_verbatim(const MomentState& s, const SystemParams& params) {
    const double R = params.R;
    const double m = params.mass;
    const double pt = s.point.p_theta;
    const double pz = s.point.p_z;
    const double se = sech(s.point.z / R);
    const double s2 = se * se;
    const double tn = std::tanh(s.point.z / R);
    const double eta = s2 / (2.0 * m * R * R);
    const double A = 2.0 - 3.0 * s2;
    const double P2 = pt * pt + R * R * pz * pz;
    const auto& g = s.g;
    const double g1 = g[0], g2 = g[1], g3 = g[2], g4 = g[3], g5 = g[4], g6 = g[5], g7 = g[6],
                 g8 = g[7], g9 = g[8], g10 = g[9];
    (void)g7;

    const double hq = effective_hamiltonian(s, params, HqSource::Transcribed);

    MomentState d;
    d.point.theta =
        (s2 / (m * R * R)) * (pt - (4.0 / R) * tn * pt * g4 + (2.0 * pt / (R * R)) * A * g9);
    d.point.p_theta = 0.0;
    d.point.z = (s2 / (m * R * R)) * (R * pz - 2.0 * tn * g6 + (2.0 * pz / R) * A * g9);
    d.point.p_z = (2.0 / R) * tn * hq -
                  (2.0 / (m * R * R)) * s2 * s2 *
                      ((3.0 / (R * R * R)) * P2 * tn * g9 - pz * g6 - (pt * pt / (R * R)) * g4);

    d.g[0] = 4.0 * eta * (-(tn / R) * pt * pt * g4 + g8);
    d.g[1] = 4.0 * eta * (-(tn / R) * pt * pt * g9 + R * R * g3 + g4 - R * tn * pz * g2);
    d.g[2] = 4.0 * eta *
             (-(tn / R) * pt * pt * (g6 - g1) + R * tn * pz * g3 + g5 - (P2 / (R * R)) * A * g2);
    d.g[3] = 4.0 * R * eta * (-tn * pz * pz * g4 + R * g5);
    d.g[4] = (4.0 / R) * eta * (tn * (pt * pt * g8 + R * R * pz * g5) - (P2 / R) * A * g4);
    d.g[5] = eta * ((4.0 * tn / R) * pt * pt * g4 + 4.0 * R * R * g10 - (4.0 * P2 / (R * R)) * A * g9);
    d.g[6] = eta * (-(4.0 * tn / R) * pt * pt * g2 + 8.0 * g1);
    d.g[7] = 0.0;
    d.g[8] = eta * (-8.0 * R * tn * pz * g9 + 8.0 * R * R * g6);
    d.g[9] = eta * ((8.0 * tn / R) * pt * pt * g5 - (8.0 * P2 / (R * R)) * A * g6 +
                    8.0 * R * tn * pz * g10);
    return d;
}

} // namespace catenoid
