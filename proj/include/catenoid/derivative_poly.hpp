#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "catenoid/rational.hpp"
#include "catenoid/stirling.hpp"

namespace catenoid {

// Polynomial Q_n in t = tanh(x) with exact integer coefficients such that
// (d/dx)^n sech^2(x) = sech^2(x) * Q_n(tanh x).
struct DerivPoly {
    int n = 0;                          // derivative order
    std::vector<std::int64_t> coeffs;   // coeffs[k] multiplies t^k

    double evaluate(double t) const {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            acc = acc * t + static_cast<double>(coeffs[k]);
        }
        return acc;
    }

    int degree() const {
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            if (coeffs[k] != 0) return static_cast<int>(k);
        }
        return 0;
    }

    friend bool operator==(const DerivPoly& a, const DerivPoly& b) {
        auto trimmed = [](const DerivPoly& p) {
            std::vector<std::int64_t> c = p.coeffs;
            while (!c.empty() && c.back() == 0) c.pop_back();
            return c;
        };
        return trimmed(a) == trimmed(b);
    }

    std::string str() const {
        std::string s;
        bool first = true;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k] == 0) continue;
            if (!first) s += coeffs[k] > 0 ? " + " : " - ";
            else if (coeffs[k] < 0) s += "-";
            std::int64_t mag = std::abs(coeffs[k]);
            if (mag != 1 || k == 0) s += std::to_string(mag);
            if (k >= 1) s += "t";
            if (k >= 2) s += "^" + std::to_string(k);
            first = false;
        }
        return first ? "0" : s;
    }
};

// Normative construction: Q_0 = 1, Q_{n+1}(t) = (1 - t^2) Q_n'(t) - 2 t Q_n(t).
inline DerivPoly derivative_polynomial(int n) {
    if (n < 0) throw std::domain_error("derivative_polynomial requires n >= 0");
    DerivPoly q{0, {1}};
    for (int step = 0; step < n; ++step) {
        std::vector<std::int64_t> next(q.coeffs.size() + 1, 0);
        for (std::size_t k = 0; k < q.coeffs.size(); ++k) {
            std::int64_t ck = q.coeffs[k];
            if (ck == 0) continue;
            // (1 - t^2) * d/dt [c t^k] = c k t^{k-1} - c k t^{k+1}
            if (k >= 1) next[k - 1] = detail::checked_add(next[k - 1], detail::checked_mul(ck, static_cast<std::int64_t>(k)));
            next[k + 1] = detail::checked_add(next[k + 1], detail::checked_mul(ck, -static_cast<std::int64_t>(k)));
            // -2 t * c t^k
            next[k + 1] = detail::checked_add(next[k + 1], detail::checked_mul(ck, -2));
        }
        q.coeffs = std::move(next);
        q.n = step + 1;
    }
    return q;
}

// The legacy Stirling-number closed form
//   -2^{n+1} * sum_{k=1}^{n+1} (k!/2^k) S_{n+1}^{(k)} (t - 1)^{k-1},
// kept verbatim as a reporting-only cross-check; it disagrees with
// derivative_polynomial by an overall sign at even n (see verify command).
inline DerivPoly derivative_polynomial_paper_form(int n) {
    if (n < 0) throw std::domain_error("derivative_polynomial_paper_form requires n >= 0");
    // Accumulate the polynomial in t with exact rational coefficients.
    std::vector<Rational> acc(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int k = 1; k <= n + 1; ++k) {
        Rational pref = Rational(factorial(k), detail::checked_mul(1LL << std::min(k, 62), 1LL));
        if (k > 62) throw std::overflow_error("paper-form prefactor overflow");
        pref = pref * Rational(stirling2(n + 1, k));
        // expand (t - 1)^{k-1}
        for (int j = 0; j <= k - 1; ++j) {
            std::int64_t bin = binomial(k - 1, j);
            std::int64_t sign = ((k - 1 - j) % 2 == 0) ? 1 : -1;
            acc[static_cast<std::size_t>(j)] += pref * Rational(detail::checked_mul(bin, sign));
        }
    }
    std::int64_t scale = -1;
    for (int i = 0; i < n + 1; ++i) scale = detail::checked_mul(scale, 2);
    DerivPoly p{n, {}};
    p.coeffs.resize(acc.size());
    for (std::size_t j = 0; j < acc.size(); ++j) {
        Rational v = acc[j] * Rational(scale);
        if (!v.is_integer()) throw std::logic_error("paper-form coefficient is not an integer");
        p.coeffs[j] = v.num();
    }
    return p;
}

// Relation of the two constructions at a given order, for the verify report.
enum class DerivPolyRelation { Equal, SignFlipped, Differs };

inline DerivPolyRelation compare_derivative_polynomial_forms(int n) {
    DerivPoly q = derivative_polynomial(n);
    DerivPoly p = derivative_polynomial_paper_form(n);
    if (p == q) return DerivPolyRelation::Equal;
    DerivPoly neg = p;
    for (auto& c : neg.coeffs) c = -c;
    if (neg == q) return DerivPolyRelation::SignFlipped;
    return DerivPolyRelation::Differs;
}

} // namespace catenoid
