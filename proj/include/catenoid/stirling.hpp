#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

#include "catenoid/rational.hpp"

namespace catenoid {

// Stirling numbers of the second kind S(n, k): the number of ways to
// partition an n-element set into k nonempty blocks.  Computed exactly via
// the triangular recurrence S(n, k) = k S(n-1, k) + S(n-1, k-1) with
// overflow-checked arithmetic; values are memoized.
inline std::int64_t stirling2(int n, int k) {
    if (n < 0 || k < 0) throw std::domain_error("stirling2 requires nonnegative arguments");
    if (k > n) return 0;
    if (n == 0) return 1; // S(0,0) = 1
    if (k == 0) return 0;
    static std::map<std::pair<int, int>, std::int64_t> cache;
    auto it = cache.find({n, k});
    if (it != cache.end()) return it->second;
    std::int64_t v = detail::checked_add(detail::checked_mul(k, stirling2(n - 1, k)),
                                         stirling2(n - 1, k - 1));
    cache[{n, k}] = v;
    return v;
}

} // namespace catenoid
