#pragma once

// Independent brute-force oracle for the moment Poisson bracket.
//
// Instead of the closed-form combinatorial bracket (moment_bracket.hpp), this
// module computes {G^A, G^B} from first principles:
//   1. write each central Weyl moment as a polynomial in the expectation
//      values E_{ijkl} = <x1^i p1^j x2^k p2^l> of NORMAL-ordered operator
//      monomials (exact noncommutative algebra with symbolic hbar),
//   2. apply the quantum phase-space Poisson structure
//      {E_alpha, E_beta} = <[O_alpha, O_beta]> / (i hbar), extended to
//      polynomials by the Leibniz rule,
//   3. convert the result back to central Weyl moments and assert that all
//      mean-value (q, P) dependence and all imaginary parts cancel exactly.
// Every step uses exact rational arithmetic; nothing here shares code with
// the production bracket engine.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "catenoid/moment_combination.hpp"
#include "catenoid/moment_index.hpp"
#include "catenoid/rational.hpp"

namespace catenoid::reference {

// ---------------------------------------------------------------------------
// Exact complex rational coefficients.
struct CRat {
    Rational re{0};
    Rational im{0};

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend CRat operator+(const CRat& a, const CRat& b) { return {a.re + b.re, a.im + b.im}; }
    friend CRat operator-(const CRat& a, const CRat& b) { return {a.re - b.re, a.im - b.im}; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }

    CRat times_i() const { return {-im, re}; }        // multiply by +i
    CRat times_neg_i() const { return {im, -re}; }    // multiply by -i (division by i)

    // multiply by i^k
    CRat times_i_pow(int k) const {
        CRat r = *this;
        for (int t = 0; t < ((k % 4) + 4) % 4; ++t) r = r.times_i();
        return r;
    }
};

inline CRat crat(std::int64_t n) { return {Rational(n), Rational(0)}; }
inline CRat crat(const Rational& r) { return {r, Rational(0)}; }

// ---------------------------------------------------------------------------
// Normal-ordered noncommutative polynomials in two canonical pairs.
// Monomial key: powers (x1, p1, x2, p2) plus the hbar grade.
using NCKey = std::array<int, 5>;
using NCPoly = std::map<NCKey, CRat>;

inline void nc_add_term(NCPoly& poly, const NCKey& key, const CRat& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = poly.try_emplace(key, coeff);
    if (!inserted) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) poly.erase(it);
    }
}

inline NCPoly nc_monomial(int x1, int p1, int x2, int p2) {
    NCPoly poly;
    nc_add_term(poly, {x1, p1, x2, p2, 0}, crat(1));
    return poly;
}

// Product of two normal-ordered polynomials, re-normal-ordered with the
// rewriting p^n x^m = sum_j (-i hbar)^j j! C(n,j) C(m,j) x^{m-j} p^{n-j}.
inline NCPoly nc_mul(const NCPoly& A, const NCPoly& B) {
    NCPoly out;
    for (const auto& [ka, ca] : A) {
        for (const auto& [kb, cb] : B) {
            const int n1 = ka[1], m1 = kb[0]; // mode-1 reordering p1^n1 x1^m1
            const int n2 = ka[3], m2 = kb[2]; // mode-2 reordering p2^n2 x2^m2
            for (int j1 = 0; j1 <= std::min(n1, m1); ++j1) {
                std::int64_t f1 = detail::checked_mul(
                    factorial(j1), detail::checked_mul(binomial(n1, j1), binomial(m1, j1)));
                for (int j2 = 0; j2 <= std::min(n2, m2); ++j2) {
                    std::int64_t f2 = detail::checked_mul(
                        factorial(j2), detail::checked_mul(binomial(n2, j2), binomial(m2, j2)));
                    CRat coeff = ca * cb * crat(detail::checked_mul(f1, f2));
                    // (-i)^{j1+j2} from (-i hbar)^{j}
                    coeff = coeff.times_i_pow(3 * (j1 + j2));
                    NCKey key{ka[0] + kb[0] - j1, ka[1] + kb[1] - j1,
                              ka[2] + kb[2] - j2, ka[3] + kb[3] - j2,
                              ka[4] + kb[4] + j1 + j2};
                    nc_add_term(out, key, coeff);
                }
            }
        }
    }
    return out;
}

inline NCPoly nc_sub(NCPoly A, const NCPoly& B) {
    for (const auto& [k, c] : B) nc_add_term(A, k, crat(-1) * c);
    return A;
}

inline NCPoly nc_commutator(const NCPoly& A, const NCPoly& B) {
    return nc_sub(nc_mul(A, B), nc_mul(B, A));
}

// Weyl (fully symmetrized) ordering of x^m p^n in one mode, normal-ordered:
//   W(x^m p^n) = 2^{-m} sum_k C(m,k) x^k p^n x^{m-k}.
inline NCPoly weyl_monomial_mode(int m, int n, int mode) {
    auto mono = [&](int xs, int ps) {
        return mode == 0 ? nc_monomial(xs, ps, 0, 0) : nc_monomial(0, 0, xs, ps);
    };
    NCPoly sum;
    for (int k = 0; k <= m; ++k) {
        NCPoly term = nc_mul(nc_mul(mono(k, 0), mono(0, n)), mono(m - k, 0));
        CRat w = crat(Rational(binomial(m, k), std::int64_t(1) << m));
        for (const auto& [key, c] : term) nc_add_term(sum, key, c * w);
    }
    return sum;
}

inline NCPoly weyl_monomial(int i, int j, int k, int l) {
    return nc_mul(weyl_monomial_mode(i, j, 0), weyl_monomial_mode(k, l, 1));
}

// ---------------------------------------------------------------------------
// Commuting polynomials in the expectation variables E_{ijkl}.
using EVar = std::array<int, 4>;

struct CKey {
    int hbar_pow = 0;
    std::vector<EVar> evars; // sorted multiset

    friend bool operator<(const CKey& l, const CKey& r) {
        if (l.hbar_pow != r.hbar_pow) return l.hbar_pow < r.hbar_pow;
        return l.evars < r.evars;
    }
};
using CPoly = std::map<CKey, CRat>;

inline void c_add_term(CPoly& poly, CKey key, const CRat& coeff) {
    if (coeff.is_zero()) return;
    std::sort(key.evars.begin(), key.evars.end());
    auto [it, inserted] = poly.try_emplace(std::move(key), coeff);
    if (!inserted) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) poly.erase(it);
    }
}

inline CPoly c_mul(const CPoly& A, const CPoly& B) {
    CPoly out;
    for (const auto& [ka, ca] : A) {
        for (const auto& [kb, cb] : B) {
            CKey key;
            key.hbar_pow = ka.hbar_pow + kb.hbar_pow;
            key.evars = ka.evars;
            key.evars.insert(key.evars.end(), kb.evars.begin(), kb.evars.end());
            c_add_term(out, std::move(key), ca * cb);
        }
    }
    return out;
}

inline CPoly c_scale(const CPoly& A, const CRat& s) {
    CPoly out;
    for (const auto& [k, c] : A) c_add_term(out, k, c * s);
    return out;
}

inline CPoly c_add(CPoly A, const CPoly& B) {
    for (const auto& [k, c] : B) c_add_term(A, k, c);
    return A;
}

// Partial derivative with respect to one E variable.
inline CPoly c_diff(const CPoly& A, const EVar& v) {
    CPoly out;
    for (const auto& [key, coeff] : A) {
        int mult = 0;
        for (const auto& e : key.evars) mult += (e == v) ? 1 : 0;
        if (mult == 0) continue;
        CKey dkey;
        dkey.hbar_pow = key.hbar_pow;
        bool removed = false;
        for (const auto& e : key.evars) {
            if (!removed && e == v) {
                removed = true;
                continue;
            }
            dkey.evars.push_back(e);
        }
        c_add_term(out, std::move(dkey), coeff * crat(mult));
    }
    return out;
}

// Interpret a normal-ordered operator polynomial as its expectation value:
// each monomial becomes (at most) one E variable.
inline CPoly nc_expectation(const NCPoly& nc) {
    CPoly out;
    for (const auto& [key, coeff] : nc) {
        CKey ck;
        ck.hbar_pow = key[4];
        EVar v{key[0], key[1], key[2], key[3]};
        if (v != EVar{0, 0, 0, 0}) ck.evars.push_back(v);
        c_add_term(out, std::move(ck), coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Central moments as polynomials in the E variables.
//
// G^{a,b,c,d} = < W((x1-q1)^a (p1-P1)^b) W((x2-q2)^c (p2-P2)^d) >, expanded by
// binomials in the mean values, where q1 = E_{1000}, P1 = E_{0100}, etc.
inline const EVar kQ1{1, 0, 0, 0};
inline const EVar kP1{0, 1, 0, 0};
inline const EVar kQ2{0, 0, 1, 0};
inline const EVar kP2{0, 0, 0, 1};

inline CPoly mean_power(const EVar& v, int pow, bool negate) {
    CPoly out;
    CKey key;
    key.evars.assign(static_cast<std::size_t>(pow), v);
    c_add_term(out, std::move(key), crat((negate && pow % 2 == 1) ? -1 : 1));
    return out;
}

inline CPoly central_moment_in_E(const MomentIndex& idx) {
    CPoly total;
    for (int i = 0; i <= idx.a; ++i) {
        for (int j = 0; j <= idx.b; ++j) {
            for (int k = 0; k <= idx.c; ++k) {
                for (int l = 0; l <= idx.d; ++l) {
                    std::int64_t binprod = detail::checked_mul(
                        detail::checked_mul(binomial(idx.a, i), binomial(idx.b, j)),
                        detail::checked_mul(binomial(idx.c, k), binomial(idx.d, l)));
                    CPoly term = nc_expectation(weyl_monomial(i, j, k, l));
                    term = c_mul(term, mean_power(kQ1, idx.a - i, true));
                    term = c_mul(term, mean_power(kP1, idx.b - j, true));
                    term = c_mul(term, mean_power(kQ2, idx.c - k, true));
                    term = c_mul(term, mean_power(kP2, idx.d - l, true));
                    total = c_add(total, c_scale(term, crat(binprod)));
                }
            }
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Poisson brackets of the basic E variables:
//   {E_alpha, E_beta} = <[O_alpha, O_beta]>/(i hbar).
inline CPoly basic_bracket(const EVar& va, const EVar& vb) {
    static std::map<std::pair<EVar, EVar>, CPoly> cache;
    auto it = cache.find({va, vb});
    if (it != cache.end()) return it->second;

    NCPoly oa = nc_monomial(va[0], va[1], va[2], va[3]);
    NCPoly ob = nc_monomial(vb[0], vb[1], vb[2], vb[3]);
    NCPoly comm = nc_commutator(oa, ob);
    // divide by (i hbar): every commutator term carries hbar_pow >= 1
    NCPoly reduced;
    for (const auto& [key, coeff] : comm) {
        if (key[4] < 1) throw std::logic_error("commutator term without hbar factor");
        NCKey nk = key;
        nk[4] -= 1;
        nc_add_term(reduced, nk, coeff.times_neg_i());
    }
    CPoly result = nc_expectation(reduced);
    cache[{va, vb}] = result;
    return result;
}

// Poisson bracket of two polynomials in the E variables via the chain rule.
inline CPoly poly_bracket(const CPoly& A, const CPoly& B) {
    // collect variables present
    auto collect = [](const CPoly& p) {
        std::vector<EVar> vars;
        for (const auto& [key, coeff] : p) {
            for (const auto& v : key.evars) {
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            }
        }
        return vars;
    };
    CPoly out;
    for (const EVar& va : collect(A)) {
        CPoly dA = c_diff(A, va);
        for (const EVar& vb : collect(B)) {
            CPoly s = basic_bracket(va, vb);
            if (s.empty()) continue;
            CPoly dB = c_diff(B, vb);
            out = c_add(out, c_mul(c_mul(dA, dB), s));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conversion from E variables back to central moments.
struct GKey {
    int hbar_pow = 0;
    std::array<int, 4> qp{0, 0, 0, 0}; // powers of q1, P1, q2, P2
    std::vector<MomentIndex> gvars;    // sorted central-moment factors

    friend bool operator<(const GKey& l, const GKey& r) {
        if (l.hbar_pow != r.hbar_pow) return l.hbar_pow < r.hbar_pow;
        if (l.qp != r.qp) return l.qp < r.qp;
        return std::lexicographical_compare(l.gvars.begin(), l.gvars.end(), r.gvars.begin(),
                                            r.gvars.end());
    }
};
using GPoly = std::map<GKey, CRat>;

inline void g_add_term(GPoly& poly, GKey key, const CRat& coeff) {
    if (coeff.is_zero()) return;
    std::sort(key.gvars.begin(), key.gvars.end());
    auto [it, inserted] = poly.try_emplace(std::move(key), coeff);
    if (!inserted) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) poly.erase(it);
    }
}

inline GPoly g_mul(const GPoly& A, const GPoly& B) {
    GPoly out;
    for (const auto& [ka, ca] : A) {
        for (const auto& [kb, cb] : B) {
            GKey key;
            key.hbar_pow = ka.hbar_pow + kb.hbar_pow;
            for (int i = 0; i < 4; ++i) key.qp[i] = ka.qp[i] + kb.qp[i];
            key.gvars = ka.gvars;
            key.gvars.insert(key.gvars.end(), kb.gvars.begin(), kb.gvars.end());
            g_add_term(out, std::move(key), ca * cb);
        }
    }
    return out;
}

// E_{ijkl} expressed through mean values and central moments:
// per mode, x^i p^j = sum_t (i hbar/2)^t t! C(i,t) C(j,t) W(x^{i-t} p^{j-t}),
// then W(x^mu p^nu) = sum C(mu,al) C(nu,be) q^{mu-al} P^{nu-be} Wc(al,be),
// and <Wc1(al,be) Wc2(ga,de)> = G^{al,be,ga,de} (0 at total order 1).
inline GPoly evar_to_central(const EVar& v) {
    static std::map<EVar, GPoly> cache;
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;

    GPoly total;
    const int i = v[0], j = v[1], k = v[2], l = v[3];
    for (int t1 = 0; t1 <= std::min(i, j); ++t1) {
        for (int t2 = 0; t2 <= std::min(k, l); ++t2) {
            std::int64_t f1 = detail::checked_mul(
                factorial(t1), detail::checked_mul(binomial(i, t1), binomial(j, t1)));
            std::int64_t f2 = detail::checked_mul(
                factorial(t2), detail::checked_mul(binomial(k, t2), binomial(l, t2)));
            std::int64_t half = std::int64_t(1) << (t1 + t2);
            CRat pref = crat(Rational(detail::checked_mul(f1, f2), half)).times_i_pow(t1 + t2);
            const int mu = i - t1, nu = j - t1, rho = k - t2, tau = l - t2;
            for (int al = 0; al <= mu; ++al) {
                for (int be = 0; be <= nu; ++be) {
                    for (int ga = 0; ga <= rho; ++ga) {
                        for (int de = 0; de <= tau; ++de) {
                            int order = al + be + ga + de;
                            if (order == 1) continue; // central order-1 vanishes
                            std::int64_t binprod = detail::checked_mul(
                                detail::checked_mul(binomial(mu, al), binomial(nu, be)),
                                detail::checked_mul(binomial(rho, ga), binomial(tau, de)));
                            GKey key;
                            key.hbar_pow = t1 + t2;
                            key.qp = {mu - al, nu - be, rho - ga, tau - de};
                            if (order >= 2) key.gvars.push_back(MomentIndex(al, be, ga, de));
                            g_add_term(total, std::move(key), pref * crat(binprod));
                        }
                    }
                }
            }
        }
    }
    cache[v] = total;
    return total;
}

inline GPoly cpoly_to_central(const CPoly& p) {
    GPoly total;
    for (const auto& [key, coeff] : p) {
        GPoly term;
        GKey unit;
        unit.hbar_pow = key.hbar_pow;
        g_add_term(term, std::move(unit), coeff);
        for (const EVar& v : key.evars) term = g_mul(term, evar_to_central(v));
        for (const auto& [k, c] : term) g_add_term(total, k, c);
    }
    return total;
}

// ---------------------------------------------------------------------------
// The oracle bracket.  Throws if mean-value dependence or imaginary parts
// fail to cancel — those cancellations are exactly what the closed-form
// engine takes for granted.
inline MomentCombination oracle_moment_bracket(const MomentIndex& i1, const MomentIndex& i2) {
    CPoly a = central_moment_in_E(i1);
    CPoly b = central_moment_in_E(i2);
    GPoly g = cpoly_to_central(poly_bracket(a, b));

    MomentCombination out;
    for (const auto& [key, coeff] : g) {
        if (key.qp != std::array<int, 4>{0, 0, 0, 0}) {
            throw std::logic_error("oracle bracket: mean-value dependence did not cancel");
        }
        if (!coeff.im.is_zero()) {
            throw std::logic_error("oracle bracket: imaginary residue did not cancel");
        }
        out.add_term(coeff.re, key.hbar_pow, key.gvars);
    }
    return out;
}

// {classical variable, G^A} via the same machinery; must come out zero.
inline MomentCombination oracle_classical_bracket(const EVar& which, const MomentIndex& idx) {
    CPoly a;
    CKey ka;
    ka.evars.push_back(which);
    c_add_term(a, std::move(ka), crat(1));
    GPoly g = cpoly_to_central(poly_bracket(a, central_moment_in_E(idx)));
    MomentCombination out;
    for (const auto& [key, coeff] : g) {
        if (!coeff.im.is_zero()) throw std::logic_error("classical bracket: imaginary residue");
        if (key.qp != std::array<int, 4>{0, 0, 0, 0}) {
            throw std::logic_error("classical bracket: mean-value dependence did not cancel");
        }
        out.add_term(coeff.re, key.hbar_pow, key.gvars);
    }
    return out;
}

} // namespace catenoid::reference
