#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace catenoid {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; the rule is
// symmetric). Nodes 1, 3, 5, 7 are the embedded 7-point Gauss abscissae.
inline constexpr double kK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {0.129484966168870, 0.279705391489277,
                                         0.381830050505119, 0.417959183673469};

template <typename F>
void gauss_kronrod(F&& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc_k = 0.0, acc_g = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = kK15Nodes[i];
        const double fv = (i == 7) ? f(mid) : f(mid - half * x) + f(mid + half * x);
        acc_k += kK15Weights[i] * fv;
        if (i % 2 == 1) acc_g += kG7Weights[i / 2] * fv;
    }
    k15 = acc_k * half;
    const double g7 = acc_g * half;
    err = std::abs(k15 - g7);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration: bisect the segment with the largest
// error estimate until the summed estimate drops below abs_tol or the segment
// budget runs out (converged=false then, with the achieved estimate).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-9,
                                    int max_segments = 400) {
    struct Segment {
        double a, b, value, error;
    };
    if (!(b > a)) throw std::invalid_argument("integration bounds must satisfy a < b");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");

    std::vector<Segment> segs;
    QuadratureResult res;
    auto push = [&](double lo, double hi) {
        Segment s{lo, hi, 0.0, 0.0};
        detail::gauss_kronrod(f, lo, hi, s.value, s.error);
        res.evaluations += 15;
        segs.push_back(s);
    };
    push(a, b);

    while (static_cast<int>(segs.size()) < max_segments) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (total_err <= abs_tol) break;
        Segment s = segs[worst];
        segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(worst));
        const double mid = 0.5 * (s.a + s.b);
        push(s.a, mid);
        push(mid, s.b);
    }

    res.value = 0.0;
    res.error_estimate = 0.0;
    for (const Segment& s : segs) {
        res.value += s.value;
        res.error_estimate += s.error;
    }
    res.converged = res.error_estimate <= abs_tol;
    return res;
}

} // namespace catenoid
