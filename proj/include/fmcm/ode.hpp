#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include "fmcm/errors.hpp"

namespace fmcm {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double h_init = 1e-4;
    double h_min = 1e-13;
    double h_max = 5.0;
    long max_steps = 2000000;
};

/**
 * Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t1 with
 * embedded error control and step rejection.  The observer, when nonempty,
 * is called after every accepted step with (t, y); it is not called for the
 * initial state.  Throws IntegrationFailure when the step size underflows
 * h_min or the step budget runs out.
 */
template <std::size_t N>
void integrate_dp45(
    const std::function<std::array<double, N>(double, const std::array<double, N>&)>& f,
    double t0, double t1, std::array<double, N>& y, const OdeOptions& opt,
    const std::function<void(double, const std::array<double, N>&)>& observer) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    auto axpy = [](std::array<double, N> base, double h,
                   std::initializer_list<std::pair<double, const std::array<double, N>*>> terms) {
        for (auto [coef, k] : terms)
            for (std::size_t i = 0; i < N; ++i) base[i] += h * coef * (*k)[i];
        return base;
    };

    double t = t0;
    double h = std::min(opt.h_init, t1 - t0);
    std::array<double, N> k1 = f(t, y);

    for (long step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) return;
        h = std::min(h, t1 - t);
        if (h < opt.h_min)
            throw IntegrationFailure("integrate_dp45: step size underflow");

        const auto k2 = f(t + h / 5, axpy(y, h, {{a21, &k1}}));
        const auto k3 = f(t + 3 * h / 10, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const auto k4 =
            f(t + 4 * h / 5, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const auto k5 = f(t + 8 * h / 9, axpy(y, h, {{a51, &k1}, {a52, &k2},
                                                     {a53, &k3}, {a54, &k4}}));
        const auto k6 = f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3},
                                             {a64, &k4}, {a65, &k5}}));
        const auto y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4},
                                       {b5, &k5}, {b6, &k6}});
        const auto k7 = f(t + h, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                opt.abs_tol +
                opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            err = std::max(err, std::fabs(e) / scale);
        }

        if (err <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            if (observer) observer(t, y);
        }
        const double factor =
            err == 0.0 ? 5.0
                       : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(factor * h, opt.h_max);
    }
    throw IntegrationFailure("integrate_dp45: step budget exhausted");
}

}  // namespace fmcm
