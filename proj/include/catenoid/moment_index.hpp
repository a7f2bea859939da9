#pragma once

#include <array>
#include <compare>
#include <stdexcept>
#include <string>

namespace catenoid {

// Index (a,b,c,d) of the Weyl-ordered central moment G^{a,b,c,d}:
//   a — power of (theta-hat - theta),  b — power of (P_theta-hat - p_theta),
//   c — power of (z-hat - z),          d — power of (P_z-hat - p_z).
// Order-0 denotes the constant 1; order-1 moments vanish identically.
struct MomentIndex {
    int a = 0;
    int b = 0;
    int c = 0;
    int d = 0;

    constexpr MomentIndex() = default;
    constexpr MomentIndex(int a_, int b_, int c_, int d_) : a(a_), b(b_), c(c_), d(d_) {
        if (a < 0 || b < 0 || c < 0 || d < 0) {
            throw std::domain_error("MomentIndex entries must be non-negative");
        }
    }

    constexpr int order() const { return a + b + c + d; }

    // Per-mode accessors: mode 0 is (theta, p_theta), mode 1 is (z, p_z).
    constexpr int xpow(int mode) const { return mode == 0 ? a : c; }
    constexpr int ppow(int mode) const { return mode == 0 ? b : d; }

    constexpr std::array<int, 4> tuple() const { return {a, b, c, d}; }

    friend constexpr auto operator<=>(const MomentIndex& l, const MomentIndex& r) {
        return l.tuple() <=> r.tuple();
    }
    friend constexpr bool operator==(const MomentIndex& l, const MomentIndex& r) {
        return l.tuple() == r.tuple();
    }

    std::string str() const {
        return "G^{" + std::to_string(a) + "," + std::to_string(b) + "," +
               std::to_string(c) + "," + std::to_string(d) + "}";
    }
};

// Returns the index with `delta` added to the x-power (position) of `mode`;
// throws if the result would be negative.
inline MomentIndex shift_x(const MomentIndex& i, int mode, int delta) {
    MomentIndex r = i;
    (mode == 0 ? r.a : r.c) += delta;
    if (r.a < 0 || r.c < 0) throw std::domain_error("negative moment index");
    return r;
}

// Same for the p-power (momentum) of `mode`.
inline MomentIndex shift_p(const MomentIndex& i, int mode, int delta) {
    MomentIndex r = i;
    (mode == 0 ? r.b : r.d) += delta;
    if (r.b < 0 || r.d < 0) throw std::domain_error("negative moment index");
    return r;
}

} // namespace catenoid
