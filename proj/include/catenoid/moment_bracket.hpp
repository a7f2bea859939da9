#pragma once

#include <stdexcept>

#include "catenoid/moment_combination.hpp"
#include "catenoid/moment_index.hpp"
#include "catenoid/rational.hpp"

namespace catenoid {

namespace detail {

// Per-mode combinatorial factor of the hbar-graded bracket term at level e_i:
//   f_i(e_i) = sum_{s=0}^{e_i} (-1)^s s! (e_i-s)!
//              C(a_i, e_i-s) C(b_i, s) C(c_i, s) C(d_i, e_i-s).
inline std::int64_t bracket_mode_factor(int e, int a, int b, int c, int d) {
    std::int64_t f = 0;
    for (int s = 0; s <= e; ++s) {
        std::int64_t term = checked_mul(factorial(s), factorial(e - s));
        term = checked_mul(term, binomial(a, e - s));
        term = checked_mul(term, binomial(b, s));
        term = checked_mul(term, binomial(c, s));
        term = checked_mul(term, binomial(d, e - s));
        f = checked_add(f, (s % 2 == 0) ? term : -term);
    }
    return f;
}

} // namespace detail

// The general Poisson bracket {G^{i1}, G^{i2}} of two Weyl-ordered central
// moments for two degrees of freedom, truncated so that no surviving factor
// exceeds max_order.  The result is the classical bilinear part
//   sum_i ( -a_i d_i G^{A - x_i} G^{B - p_i} + b_i c_i G^{A - p_i} G^{B - x_i} )
// plus the hbar-graded sum over odd n >= 1 of
//   (i hbar / 2)^{n-1} sum_{e_1+e_2=n} f_1(e_1) f_2(e_2) G^{A+B-e-e}.
// Only odd n contributes: the even-n grades belong to the symmetric
// (anticommutator) part of the underlying operator product, and odd n makes
// the prefactor (i hbar/2)^{n-1} real, so every stored coefficient is real by
// construction.  An independent operator-level oracle (see
// reference/weyl_commutator.hpp) verifies that the imaginary residue of the
// full commutator expansion cancels exactly.
inline MomentCombination moment_bracket(const MomentIndex& i1, const MomentIndex& i2,
                                        int max_order) {
    if (i1.order() < 1 || i2.order() < 1) {
        throw std::invalid_argument("moment_bracket: both indices must have order >= 1");
    }
    if (max_order < 2) {
        throw std::invalid_argument("moment_bracket: max_order must be >= 2");
    }

    MomentCombination result;

    // Classical bilinear part.
    for (int mode = 0; mode < 2; ++mode) {
        const int a = i1.xpow(mode), b = i1.ppow(mode);
        const int c = i2.xpow(mode), d = i2.ppow(mode);
        if (a > 0 && d > 0) {
            result.add_term(Rational(-static_cast<std::int64_t>(a) * d), 0,
                            {shift_x(i1, mode, -1), shift_p(i2, mode, -1)});
        }
        if (b > 0 && c > 0) {
            result.add_term(Rational(static_cast<std::int64_t>(b) * c), 0,
                            {shift_p(i1, mode, -1), shift_x(i2, mode, -1)});
        }
    }

    // hbar-graded part, odd n only; coefficients vanish beyond
    // n > min(order(i1), order(i2)) because the binomials lose support.
    const int n_max = std::min(i1.order(), i2.order());
    for (int n = 1; n <= n_max; n += 2) {
        // (i hbar / 2)^{n-1} = (-1)^{(n-1)/2} hbar^{n-1} / 2^{n-1}, real.
        std::int64_t denom = 1;
        for (int p = 0; p < n - 1; ++p) denom = detail::checked_mul(denom, 2);
        const std::int64_t sign = ((n - 1) / 2 % 2 == 0) ? 1 : -1;
        for (int e1 = 0; e1 <= n; ++e1) {
            const int e2 = n - e1;
            const int ra = i1.a + i2.a - e1, rb = i1.b + i2.b - e1;
            const int rc = i1.c + i2.c - e2, rd = i1.d + i2.d - e2;
            if (ra < 0 || rb < 0 || rc < 0 || rd < 0) continue;
            std::int64_t f1 = detail::bracket_mode_factor(e1, i1.a, i1.b, i2.a, i2.b);
            if (f1 == 0) continue;
            std::int64_t f2 = detail::bracket_mode_factor(e2, i1.c, i1.d, i2.c, i2.d);
            if (f2 == 0) continue;
            Rational coeff(detail::checked_mul(detail::checked_mul(f1, f2), sign), denom);
            result.add_term(coeff, n - 1, {MomentIndex(ra, rb, rc, rd)});
        }
    }

    return result.truncated(max_order);
}

// Classical phase-space variables are symplectically orthogonal to every
// moment: the bracket is identically zero.
enum class ClassicalVar { Theta, PTheta, Z, PZ };

inline MomentCombination classical_moment_bracket(ClassicalVar, const MomentIndex&) {
    return MomentCombination::zero();
}

} // namespace catenoid
