#pragma once

#include "phasebound/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace phasebound {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted Dormand-Prince step with Hairer's continuous extension.
template <std::size_t N>
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    std::array<State<N>, 5> r{};

    double x1() const { return x0 + h; }

    State<N> value(double x) const {
        double t = (x - x0) / h;
        double t1 = 1.0 - t;
        State<N> y{};
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r[0][i] + t * (r[1][i] + t1 * (r[2][i] + t * (r[3][i] + t1 * r[4][i])));
        return y;
    }

    State<N> derivative(double x) const {
        double t = (x - x0) / h;
        double t1 = 1.0 - t;
        State<N> dy{};
        for (std::size_t i = 0; i < N; ++i) {
            double T = r[3][i] + t1 * r[4][i];
            double S = r[2][i] + t * T;
            double Q = r[1][i] + t1 * S;
            double dS = T - t * r[4][i];
            double dQ = -S + t1 * dS;
            dy[i] = (Q + t * dQ) / h;
        }
        return dy;
    }
};

struct StepControl {
    double rtol = 1e-9;
    double atol = 1e-9;
    double initial_step = 0.0;  // 0 picks max_step / 10
    std::size_t max_steps = 20'000'000;
};

/// Integrates y' = f(x, y) from x0 to x1 (either direction) with an
/// adaptive Dormand-Prince 5(4) pair. max_step(x) bounds |h| locally and
/// observer(step) sees every accepted step. Returns y(x1).
template <std::size_t N, class Rhs, class MaxStep, class Observer>
State<N> integrate_dopri(Rhs&& f, State<N> y, double x0, double x1, const StepControl& ctl,
                         MaxStep&& max_step, Observer&& observer, std::size_t* steps_taken = nullptr) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

    if (x0 == x1) return y;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double x = x0;
    double h = ctl.initial_step > 0.0 ? ctl.initial_step : 0.1 * max_step(x0);
    h = std::min(h, span);

    State<N> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    k1 = f(x, y);
    std::size_t steps = 0;
    bool last_rejected = false;
    while (dir * (x1 - x) > 0.0) {
        if (++steps > ctl.max_steps) throw StiffnessFailure("step budget exhausted");
        double hmax = max_step(x);
        h = std::min(h, hmax);
        double remaining = std::abs(x1 - x);
        bool final_step = h >= remaining * (1.0 - 1e-12);
        if (final_step) h = remaining;
        if (h < 1e-13 * std::max(1.0, std::abs(x)))
            throw StiffnessFailure("step size underflow near x = " + std::to_string(x));
        double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
        k2 = f(x + c2 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(x + c3 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(x + c4 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(x + c5 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        double xnew = final_step ? x1 : x + hs;
        k6 = f(x + hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = f(xnew, ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(N));

        if (!std::isfinite(err)) {
            h *= 0.2;
            last_rejected = true;
            continue;
        }
        if (err <= 1.0) {
            DenseStep<N> step;
            step.x0 = x;
            step.h = xnew - x;
            for (std::size_t i = 0; i < N; ++i) {
                double ydiff = ynew[i] - y[i];
                double bspl = step.h * k1[i] - ydiff;
                step.r[0][i] = y[i];
                step.r[1][i] = ydiff;
                step.r[2][i] = bspl;
                step.r[3][i] = ydiff - step.h * k7[i] - bspl;
                step.r[4][i] = step.h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                         d6 * k6[i] + d7 * k7[i]);
            }
            observer(step);
            x = xnew;
            y = ynew;
            k1 = k7;
            double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
        }
    }
    if (steps_taken) *steps_taken += steps;
    return y;
}

} // namespace phasebound
