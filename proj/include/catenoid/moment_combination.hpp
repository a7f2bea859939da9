#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catenoid/moment_index.hpp"
#include "catenoid/rational.hpp"

namespace catenoid {

// A finite exact linear combination of products of central moments, each term
// carrying a symbolic power of hbar:
//   sum_k  coeff_k * hbar^{h_k} * prod_j G^{index_{kj}}.
// Terms with an order-1 factor are identically zero and are never stored;
// order-0 factors are the constant 1 and are dropped from the product.
class MomentCombination {
public:
    struct TermKey {
        int hbar_pow = 0;
        std::vector<MomentIndex> factors; // sorted, each of order >= 2

        friend bool operator<(const TermKey& l, const TermKey& r) {
            if (l.hbar_pow != r.hbar_pow) return l.hbar_pow < r.hbar_pow;
            return std::lexicographical_compare(l.factors.begin(), l.factors.end(),
                                                r.factors.begin(), r.factors.end());
        }
        friend bool operator==(const TermKey& l, const TermKey& r) {
            return l.hbar_pow == r.hbar_pow && l.factors == r.factors;
        }
    };

    using TermMap = std::map<TermKey, Rational>;

    MomentCombination() = default;

    static MomentCombination zero() { return {}; }

    static MomentCombination constant(const Rational& c) {
        MomentCombination m;
        m.add_term(c, 0, {});
        return m;
    }

    static MomentCombination single(const MomentIndex& i, const Rational& c = Rational(1),
                                    int hbar_pow = 0) {
        MomentCombination m;
        m.add_term(c, hbar_pow, {i});
        return m;
    }

    // Adds coeff * hbar^hbar_pow * prod(factors), normalizing the factor list.
    void add_term(const Rational& coeff, int hbar_pow, std::vector<MomentIndex> factors) {
        if (coeff.is_zero()) return;
        std::vector<MomentIndex> kept;
        kept.reserve(factors.size());
        for (const MomentIndex& f : factors) {
            int ord = f.order();
            if (ord == 0) continue;       // constant factor 1
            if (ord == 1) return;         // order-1 central moments vanish
            kept.push_back(f);
        }
        std::sort(kept.begin(), kept.end());
        TermKey key{hbar_pow, std::move(kept)};
        auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    MomentCombination& operator+=(const MomentCombination& o) {
        for (const auto& [key, coeff] : o.terms_) add_term(coeff, key.hbar_pow, key.factors);
        return *this;
    }
    friend MomentCombination operator+(MomentCombination a, const MomentCombination& b) {
        return a += b;
    }

    MomentCombination operator-() const {
        MomentCombination m;
        for (const auto& [key, coeff] : terms_) m.terms_.emplace(key, -coeff);
        return m;
    }
    MomentCombination& operator-=(const MomentCombination& o) { return *this += -o; }
    friend MomentCombination operator-(MomentCombination a, const MomentCombination& b) {
        return a -= b;
    }

    MomentCombination scaled(const Rational& c) const {
        MomentCombination m;
        if (c.is_zero()) return m;
        for (const auto& [key, coeff] : terms_) m.terms_.emplace(key, coeff * c);
        return m;
    }

    friend bool operator==(const MomentCombination& a, const MomentCombination& b) {
        return a.terms_ == b.terms_;
    }

    // Drops every term containing a factor of order greater than max_order.
    MomentCombination truncated(int max_order) const {
        MomentCombination m;
        for (const auto& [key, coeff] : terms_) {
            bool keep = std::all_of(key.factors.begin(), key.factors.end(),
                                    [&](const MomentIndex& f) { return f.order() <= max_order; });
            if (keep) m.terms_.emplace(key, coeff);
        }
        return m;
    }

    // Numerical evaluation given a moment lookup and a value for hbar.
    double evaluate(const std::function<double(const MomentIndex&)>& moment_value,
                    double hbar) const {
        double acc = 0.0;
        for (const auto& [key, coeff] : terms_) {
            double term = coeff.to_double();
            for (int p = 0; p < key.hbar_pow; ++p) term *= hbar;
            for (const MomentIndex& f : key.factors) term *= moment_value(f);
            acc += term;
        }
        return acc;
    }

    // Text dump, one term per line: `coeff hbar_power a b c d [a b c d ...]`.
    // A pure constant term prints with no index columns.
    std::string dump() const {
        std::ostringstream os;
        for (const auto& [key, coeff] : terms_) {
            os << coeff.str() << ' ' << key.hbar_pow;
            for (const MomentIndex& f : key.factors) {
                os << ' ' << f.a << ' ' << f.b << ' ' << f.c << ' ' << f.d;
            }
            os << '\n';
        }
        return os.str();
    }

private:
    TermMap terms_;
};

} // namespace catenoid
