#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "catenoid/rational.hpp"

namespace catenoid {

// The coefficient K^{n,s,{e}}_{{a},{b},{c},{d}} of the general moment
// bracket:
//   K = sum_g  delta(sum_i g_i, n-s) / (s! (n-s)!)
//           * prod_i  C(a_i,e_i-g_i) C(b_i,g_i) C(c_i,g_i) C(d_i,e_i-g_i)
//                   / ( C(n-s,g_i) C(s,e_i-g_i) ),
// summed over max[e_i-s, e_i-a_i, e_i-d_i, 0] <= g_i <= min[b_i, c_i, n-s, e_i],
// i.e. exactly the support on which every binomial above is defined.
// Returns 0 when the range is empty.  Exact rational arithmetic throughout.
inline Rational kappa_coefficient(int n, int s, const std::vector<int>& e,
                                  const std::vector<int>& a, const std::vector<int>& b,
                                  const std::vector<int>& c, const std::vector<int>& d) {
    const std::size_t k = e.size();
    if (a.size() != k || b.size() != k || c.size() != k || d.size() != k) {
        throw std::invalid_argument("kappa_coefficient: tuple lengths must agree");
    }
    if (n < 1 || s < 0 || s > n) {
        throw std::invalid_argument("kappa_coefficient: require n >= 1 and 0 <= s <= n");
    }
    int esum = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (e[i] < 0 || a[i] < 0 || b[i] < 0 || c[i] < 0 || d[i] < 0) {
            throw std::invalid_argument("kappa_coefficient: negative tuple entry");
        }
        esum += e[i];
    }
    if (esum != n) throw std::invalid_argument("kappa_coefficient: sum of e_i must equal n");

    std::vector<int> lo(k), hi(k);
    for (std::size_t i = 0; i < k; ++i) {
        lo[i] = std::max({e[i] - s, e[i] - a[i], e[i] - d[i], 0});
        hi[i] = std::min({b[i], c[i], n - s, e[i]});
        if (lo[i] > hi[i]) return Rational(0);
    }

    Rational total(0);
    std::vector<int> g(lo);
    while (true) {
        int gsum = 0;
        for (std::size_t i = 0; i < k; ++i) gsum += g[i];
        if (gsum == n - s) {
            Rational term(1, detail::checked_mul(factorial(s), factorial(n - s)));
            for (std::size_t i = 0; i < k; ++i) {
                std::int64_t numer = detail::checked_mul(
                    detail::checked_mul(binomial(a[i], e[i] - g[i]), binomial(b[i], g[i])),
                    detail::checked_mul(binomial(c[i], g[i]), binomial(d[i], e[i] - g[i])));
                std::int64_t denom =
                    detail::checked_mul(binomial(n - s, g[i]), binomial(s, e[i] - g[i]));
                term *= Rational(numer, denom);
            }
            total += term;
        }
        // advance the multi-index g
        std::size_t pos = 0;
        while (pos < k && g[pos] == hi[pos]) {
            g[pos] = lo[pos];
            ++pos;
        }
        if (pos == k) break;
        ++g[pos];
    }
    return total;
}

} // namespace catenoid
