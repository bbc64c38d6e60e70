#pragma once

#include <functional>

namespace fmcm {

struct QuadratureResult {
    double value;
    double error_estimate;
    int panels;  ///< number of subintervals in the final partition
};

/**
 * Adaptive integration of f over [a, b].
 *
 * A fixed Gauss-Kronrod 7/15 kernel is applied per panel and the panel with
 * the worst error estimate is bisected until the summed estimate drops below
 *
 *     max(rel_tol * |integral|, abs_tol).
 *
 * Throws QuadratureFailure once max_panels subintervals are in play without
 * reaching the tolerance.
 */
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol = 1e-12,
                                    double abs_tol = 0.0,
                                    int max_panels = 10000);

}  // namespace fmcm
