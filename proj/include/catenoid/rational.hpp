#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace catenoid {

// Exact rational arithmetic on 64-bit integers.  All operations detect
// overflow (via 128-bit intermediates) and throw std::overflow_error rather
// than silently wrapping; exactness is load-bearing for the bracket engine.

namespace detail {

inline std::int64_t checked_narrow(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN)) {
        throw std::overflow_error(std::string("integer overflow in ") + what);
    }
    return static_cast<std::int64_t>(v);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    return checked_narrow(static_cast<__int128>(a) + b, "addition");
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    return checked_narrow(static_cast<__int128>(a) * b, "multiplication");
}

} // namespace detail

class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t numerator) : num_(numerator), den_(1) {}
    Rational(std::int64_t numerator, std::int64_t denominator)
        : num_(numerator), den_(denominator) {
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator-() const {
        Rational r;
        r.num_ = detail::checked_narrow(-static_cast<__int128>(num_), "negation");
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        // Reduce cross terms by gcd of denominators to delay overflow.
        std::int64_t g = std::gcd(a.den_, b.den_);
        std::int64_t da = a.den_ / g;
        std::int64_t db = b.den_ / g;
        __int128 num = static_cast<__int128>(a.num_) * db + static_cast<__int128>(b.num_) * da;
        __int128 den = static_cast<__int128>(a.den_) * db;
        return from_wide(num, den);
    }

    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
        std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
        __int128 num = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
        __int128 den = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
        return from_wide(num, den);
    }

    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        Rational inv;
        inv.num_ = b.den_;
        inv.den_ = b.num_;
        if (inv.den_ < 0) {
            inv.num_ = -inv.num_;
            inv.den_ = -inv.den_;
        }
        return a * inv;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

private:
    static Rational from_wide(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a != 0) {
            num /= a;
            den /= a;
        }
        Rational r;
        r.num_ = detail::checked_narrow(num, "rational reduction");
        r.den_ = detail::checked_narrow(den, "rational reduction");
        return r;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = detail::checked_narrow(-static_cast<__int128>(num_), "negation");
            den_ = detail::checked_narrow(-static_cast<__int128>(den_), "negation");
        }
        std::int64_t g = std::gcd(std::abs(num_), den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

// n! as an exact rational-friendly integer; throws on overflow (n > 20).
inline std::int64_t factorial(int n) {
    if (n < 0) throw std::domain_error("factorial of negative argument");
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r = detail::checked_mul(r, i);
    return r;
}

// Binomial coefficient with exact integer arithmetic; zero outside support.
inline std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = detail::checked_mul(r, n - k + i);
        r /= i;
    }
    return r;
}

} // namespace catenoid
