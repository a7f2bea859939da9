#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace catenoid {

enum class OdeStatus { Ok, StepUnderflow, NonFinite, StepLimit };

inline const char* ode_status_name(OdeStatus s) {
    switch (s) {
        case OdeStatus::Ok: return "ok";
        case OdeStatus::StepUnderflow: return "step-underflow";
        case OdeStatus::NonFinite: return "non-finite";
        case OdeStatus::StepLimit: return "step-limit";
    }
    return "unknown";
}

// Continuous extension of one accepted Dormand-Prince step; quartic in the
// normalized step coordinate, 4th-order accurate across the whole interval.
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<double, N> evaluate(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        std::array<double, N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            y[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        }
        return y;
    }

    double evaluate_component(double t, std::size_t i) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        return r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
    }
};

template <std::size_t N>
struct OdeResult {
    OdeStatus status = OdeStatus::Ok;
    double t = 0.0;                  // time actually reached
    std::array<double, N> y{};       // state there (last good state on failure)
    long n_accepted = 0;
    long n_rejected = 0;
    std::string message;
};

enum class StepControl { Continue, Stop };

// Explicit Dormand-Prince 5(4) with PI step-size control (Hairer's tuning)
// and the standard quartic dense output. RHS signature:
//   void f(double t, const std::array<double,N>& y, std::array<double,N>& dydt)
// The callback sees every accepted step (with its dense interpolant) and may
// stop the integration early.
template <std::size_t N, typename Rhs>
class Dopri5 {
  public:
    Dopri5(Rhs rhs, double abs_tol = 1e-10, double rel_tol = 1e-10)
        : f_(rhs), abs_tol_(abs_tol), rel_tol_(rel_tol) {}

    long max_steps = 2000000;

    template <typename Callback>
    OdeResult<N> integrate(double t0, const std::array<double, N>& y0, double t_end,
                           Callback on_accept) {
        OdeResult<N> res;
        res.t = t0;
        res.y = y0;
        if (!(t_end > t0)) {
            res.message = "empty integration interval";
            return res;
        }

        std::array<double, N> y = y0, k1{};
        f_(t0, y, k1);
        if (!finite(k1) || !finite(y)) {
            res.status = OdeStatus::NonFinite;
            res.message = "non-finite initial state or derivative";
            return res;
        }

        double t = t0;
        double h = initial_step(t0, y, k1, t_end);
        double facold = 1e-4;
        bool last_rejected = false;
        const double uround = std::numeric_limits<double>::epsilon();

        for (long step = 0; step < max_steps;) {
            if (t >= t_end) return res;
            const double hmin = 1e3 * uround * std::max(std::abs(t), 1.0);
            if (h < hmin) {
                res.status = OdeStatus::StepUnderflow;
                res.message = "step size underflow at t = " + std::to_string(t);
                return res;
            }
            bool clamped = false;
            if (t + h >= t_end) {
                h = t_end - t;
                clamped = true;
            }

            std::array<double, N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y1{}, tmp{};
            auto stage = [&](double c, const double* a, int na, std::array<double, N>& out) {
                for (std::size_t i = 0; i < N; ++i) {
                    double acc = 0.0;
                    const std::array<double, N>* ks[6] = {&k1, &k2, &k3, &k4, &k5, &k6};
                    for (int j = 0; j < na; ++j) acc += a[j] * (*ks[static_cast<std::size_t>(j)])[i];
                    tmp[i] = y[i] + h * acc;
                }
                f_(t + c * h, tmp, out);
            };
            static constexpr double a2[] = {1.0 / 5};
            static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
            static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
            static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                            -212.0 / 729};
            static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                            49.0 / 176, -5103.0 / 18656};
            static constexpr double b[] = {35.0 / 384,      0.0,        500.0 / 1113,
                                           125.0 / 192,     -2187.0 / 6784, 11.0 / 84};
            stage(1.0 / 5, a2, 1, k2);
            stage(3.0 / 10, a3, 2, k3);
            stage(4.0 / 5, a4, 3, k4);
            stage(8.0 / 9, a5, 4, k5);
            stage(1.0, a6, 5, k6);
            for (std::size_t i = 0; i < N; ++i) {
                y1[i] = y[i] + h * (b[0] * k1[i] + b[2] * k3[i] + b[3] * k4[i] + b[4] * k5[i] +
                                    b[5] * k6[i]);
            }
            f_(t + h, y1, k7);

            // embedded 4th-order error estimate
            static constexpr double e[] = {71.0 / 57600,  0.0,          -71.0 / 16695,
                                           71.0 / 1920,   -17253.0 / 339200, 22.0 / 525,
                                           -1.0 / 40};
            double err2 = 0.0;
            bool ok = finite(y1) && finite(k7);
            if (ok) {
                for (std::size_t i = 0; i < N; ++i) {
                    const double sk =
                        abs_tol_ + rel_tol_ * std::max(std::abs(y[i]), std::abs(y1[i]));
                    const double ei = h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i] +
                                           e[4] * k5[i] + e[5] * k6[i] + e[6] * k7[i]);
                    err2 += (ei / sk) * (ei / sk);
                }
            }
            const double err = ok ? std::sqrt(err2 / static_cast<double>(N))
                                  : std::numeric_limits<double>::infinity();

            ++step;
            if (!ok) {
                // retreat hard; persistent non-finite states end in underflow
                h *= 0.25;
                last_rejected = true;
                ++res.n_rejected;
                if (h < hmin) {
                    res.status = OdeStatus::NonFinite;
                    res.message = "non-finite state at t = " + std::to_string(t);
                    return res;
                }
                continue;
            }

            static constexpr double beta = 0.04;
            static constexpr double expo1 = 0.2 - beta * 0.75;
            static constexpr double safe = 0.9;
            const double fac11 = std::pow(std::max(err, 1e-30), expo1);
            if (err <= 1.0) {
                // accept
                DenseStep<N> dense;
                dense.t0 = t;
                dense.h = h;
                static constexpr double d[] = {
                    -12715105075.0 / 11282082432.0, 0.0,
                    87487479700.0 / 32700410799.0,  -10690763975.0 / 1880347072.0,
                    701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
                    69997945.0 / 29380423.0};
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = y1[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    dense.r1[i] = y[i];
                    dense.r2[i] = ydiff;
                    dense.r3[i] = bspl;
                    dense.r4[i] = ydiff - h * k7[i] - bspl;
                    dense.r5[i] = h * (d[0] * k1[i] + d[2] * k3[i] + d[3] * k4[i] + d[4] * k5[i] +
                                       d[5] * k6[i] + d[6] * k7[i]);
                }

                facold = std::max(err, 1e-4);
                double fac = fac11 / std::pow(facold, beta);
                fac = std::max(0.1, std::min(5.0, fac / safe));
                double hnew = h / fac;
                if (last_rejected) hnew = std::min(hnew, h);
                last_rejected = false;

                t = clamped ? t_end : t + h;
                y = y1;
                k1 = k7; // FSAL
                ++res.n_accepted;
                res.t = t;
                res.y = y;

                if (on_accept(dense, t, y) == StepControl::Stop) return res;
                h = hnew;
            } else {
                h = h / std::min(5.0, fac11 / safe);
                last_rejected = true;
                ++res.n_rejected;
            }
        }
        res.status = OdeStatus::StepLimit;
        res.message = "step budget exhausted at t = " + std::to_string(res.t);
        return res;
    }

  private:
    Rhs f_;
    double abs_tol_;
    double rel_tol_;

    static bool finite(const std::array<double, N>& v) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }

    // Hairer's automatic initial step: match the scale of y and f, refine
    // with one explicit Euler probe.
    double initial_step(double t0, const std::array<double, N>& y0,
                        const std::array<double, N>& f0, double t_end) {
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = abs_tol_ + rel_tol_ * std::abs(y0[i]);
            dnf += (f0[i] / sk) * (f0[i] / sk);
            dny += (y0[i] / sk) * (y0[i] / sk);
        }
        double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h0 = std::min(h0, t_end - t0);

        std::array<double, N> y1{}, f1{};
        for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
        f_(t0 + h0, y1, f1);
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = abs_tol_ + rel_tol_ * std::abs(y0[i]);
            der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
        }
        der2 = std::sqrt(der2) / h0;

        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                           : std::pow(0.01 / der12, 0.2);
        return std::min({100.0 * h0, h1, t_end - t0});
    }
};

// Locate a root of a dense-output component inside one accepted step by
// bisection (60 halvings of the bracket; well below 1e-15 relative).
template <std::size_t N>
double dense_root(const DenseStep<N>& step, std::size_t component, double target, double t_lo,
                  double t_hi) {
    double f_lo = step.evaluate_component(t_lo, component) - target;
    for (int it = 0; it < 60; ++it) {
        const double t_mid = 0.5 * (t_lo + t_hi);
        const double f_mid = step.evaluate_component(t_mid, component) - target;
        if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
            t_lo = t_mid;
            f_lo = f_mid;
        } else {
            t_hi = t_mid;
        }
    }
    return 0.5 * (t_lo + t_hi);
}

} // namespace catenoid
