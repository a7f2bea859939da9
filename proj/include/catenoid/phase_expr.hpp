#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/params.hpp"
#include "catenoid/rational.hpp"

namespace catenoid {

// Monomial basis for phase-space coefficient functions on the catenoid:
//   sech(z/R)^s * tanh(z/R)^t * p_theta^k * p_z^l * R^r * mass^m * hbar^h
// with exact rational coefficients. The family is closed under d/dz,
// d/dp_theta and d/dp_z, which is what lets the equations of motion be built
// symbolically once and evaluated cheaply afterwards.
struct PhaseMono {
    int sech_pow = 0;
    int tanh_pow = 0;
    int ptheta_pow = 0;
    int pz_pow = 0;
    int R_pow = 0;
    int mass_pow = 0;
    int hbar_pow = 0;

    auto tuple() const {
        return std::tie(sech_pow, tanh_pow, ptheta_pow, pz_pow, R_pow, mass_pow, hbar_pow);
    }
    bool operator<(const PhaseMono& o) const { return tuple() < o.tuple(); }
    bool operator==(const PhaseMono& o) const { return tuple() == o.tuple(); }
};

// One term of a compiled (double-precision, parameter-baked) expression.
struct CompiledTerm {
    double coeff = 0.0;
    int sech_pow = 0;
    int tanh_pow = 0;
    int ptheta_pow = 0;
    int pz_pow = 0;
};

namespace detail {
inline double int_pow(double x, int n) {
    // n is a small non-negative structural exponent
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}
} // namespace detail

// A compiled expression: evaluate with sech/tanh precomputed by the caller so
// an entire right-hand-side table shares the two transcendental calls.
struct CompiledExpr {
    std::vector<CompiledTerm> terms;

    double evaluate(double se, double tn, double p_theta, double p_z) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            acc += t.coeff * detail::int_pow(se, t.sech_pow) * detail::int_pow(tn, t.tanh_pow) *
                   detail::int_pow(p_theta, t.ptheta_pow) * detail::int_pow(p_z, t.pz_pow);
        }
        return acc;
    }
    bool empty() const { return terms.empty(); }
};

class PhaseExpr {
  public:
    PhaseExpr() = default;

    static PhaseExpr zero() { return PhaseExpr(); }

    static PhaseExpr constant(const Rational& c) {
        PhaseExpr e;
        e.add_term(PhaseMono{}, c);
        return e;
    }

    static PhaseExpr monomial(const PhaseMono& m, const Rational& c) {
        PhaseExpr e;
        e.add_term(m, c);
        return e;
    }

    void add_term(const PhaseMono& m, const Rational& c) {
        if (c == Rational(0)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second == Rational(0)) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<PhaseMono, Rational>& terms() const { return terms_; }

    PhaseExpr operator+(const PhaseExpr& o) const {
        PhaseExpr r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    PhaseExpr operator-(const PhaseExpr& o) const {
        PhaseExpr r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, Rational(0) - c);
        return r;
    }

    PhaseExpr operator*(const PhaseExpr& o) const {
        PhaseExpr r;
        for (const auto& [m1, c1] : terms_) {
            for (const auto& [m2, c2] : o.terms_) {
                PhaseMono m;
                m.sech_pow = m1.sech_pow + m2.sech_pow;
                m.tanh_pow = m1.tanh_pow + m2.tanh_pow;
                m.ptheta_pow = m1.ptheta_pow + m2.ptheta_pow;
                m.pz_pow = m1.pz_pow + m2.pz_pow;
                m.R_pow = m1.R_pow + m2.R_pow;
                m.mass_pow = m1.mass_pow + m2.mass_pow;
                m.hbar_pow = m1.hbar_pow + m2.hbar_pow;
                r.add_term(m, c1 * c2);
            }
        }
        return r;
    }

    PhaseExpr scaled(const Rational& c) const {
        PhaseExpr r;
        for (const auto& [m, k] : terms_) r.add_term(m, k * c);
        return r;
    }

    // d/dz: d(sech^s)/dz = -(s/R) sech^s tanh, d(tanh^t)/dz = (t/R) tanh^{t-1} sech^2.
    PhaseExpr d_z() const {
        PhaseExpr r;
        for (const auto& [m, c] : terms_) {
            if (m.sech_pow != 0) {
                PhaseMono n = m;
                n.tanh_pow += 1;
                n.R_pow -= 1;
                r.add_term(n, c * Rational(-m.sech_pow));
            }
            if (m.tanh_pow != 0) {
                PhaseMono n = m;
                n.tanh_pow -= 1;
                n.sech_pow += 2;
                n.R_pow -= 1;
                r.add_term(n, c * Rational(m.tanh_pow));
            }
        }
        return r;
    }

    PhaseExpr d_ptheta() const {
        PhaseExpr r;
        for (const auto& [m, c] : terms_) {
            if (m.ptheta_pow != 0) {
                PhaseMono n = m;
                n.ptheta_pow -= 1;
                r.add_term(n, c * Rational(m.ptheta_pow));
            }
        }
        return r;
    }

    PhaseExpr d_pz() const {
        PhaseExpr r;
        for (const auto& [m, c] : terms_) {
            if (m.pz_pow != 0) {
                PhaseMono n = m;
                n.pz_pow -= 1;
                r.add_term(n, c * Rational(m.pz_pow));
            }
        }
        return r;
    }

    // Direct evaluation (tests and reports; the integrator uses compile()).
    double evaluate(double z, double p_theta, double p_z, const SystemParams& params) const {
        const double se = sech(z / params.R);
        const double tn = std::tanh(z / params.R);
        double acc = 0.0;
        for (const auto& [m, c] : terms_) {
            double v = c.to_double();
            v *= detail::int_pow(se, m.sech_pow) * detail::int_pow(tn, m.tanh_pow);
            v *= detail::int_pow(p_theta, m.ptheta_pow) * detail::int_pow(p_z, m.pz_pow);
            v *= std::pow(params.R, m.R_pow) * std::pow(params.mass, m.mass_pow) *
                 std::pow(params.hbar, m.hbar_pow);
            acc += v;
        }
        return acc;
    }

    // Bake the physical parameters into double coefficients.
    CompiledExpr compile(const SystemParams& params) const {
        CompiledExpr e;
        e.terms.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            CompiledTerm t;
            t.coeff = c.to_double() * std::pow(params.R, m.R_pow) *
                      std::pow(params.mass, m.mass_pow) * std::pow(params.hbar, m.hbar_pow);
            t.sech_pow = m.sech_pow;
            t.tanh_pow = m.tanh_pow;
            t.ptheta_pow = m.ptheta_pow;
            t.pz_pow = m.pz_pow;
            e.terms.push_back(t);
        }
        return e;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            auto power = [&os](const char* name, int p) {
                if (p == 0) return;
                os << "*" << name;
                if (p != 1) os << "^" << p;
            };
            power("sech", m.sech_pow);
            power("tanh", m.tanh_pow);
            power("p_theta", m.ptheta_pow);
            power("p_z", m.pz_pow);
            power("R", m.R_pow);
            power("m", m.mass_pow);
            power("hbar", m.hbar_pow);
        }
        return os.str();
    }

  private:
    std::map<PhaseMono, Rational> terms_;
};

} // namespace catenoid
