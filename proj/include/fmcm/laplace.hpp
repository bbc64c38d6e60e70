#pragma once

#include <functional>

#include <Eigen/Core>

#include "fmcm/params.hpp"

namespace fmcm {

/**
 * Sector integral with endpoint atoms,
 *
 *     F(x) = lambda1 e^{(br/2) cos(theta1 - theta_x)}
 *          + lambda2 e^{(br/2) cos(theta2 - theta_x)}
 *          + integral_{theta1}^{theta2} e^{(br/2) cos(theta - theta_x)}
 *                f(theta) dtheta / (2 pi),
 *
 * whose large-r behavior concentrates at the angle of the sector closest to
 * theta_x.  The weights may be any reals; f must be C^1 and 2 pi periodic.
 */
struct SectorIntegral {
    Params params;
    double theta1;
    double theta2;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::function<double(double)> f = [](double) { return 1.0; };
};

SectorIntegral make_sector_integral(const Params& params, double theta1,
                                    double theta2, double lambda1,
                                    double lambda2,
                                    std::function<double(double)> f = nullptr);

/// Length element of the concentration variable:
/// g(theta) = sign(theta) sqrt(2 b (1 - cos theta)) = 2 sqrt(b) sin(theta/2)
/// on [-pi, pi], clamped to +-2 sqrt(b) outside.  Odd, g'(0) = sqrt(b).
double g_map(const Params& params, double theta);

/// Inverse of g_map on [-pi, pi]; |t| <= 2 sqrt(b) required.
double g_inverse(const Params& params, double t);

/// Gaussian window
///     N0 = integral_{sqrt(r) g(theta1-theta_x)}^{sqrt(r) g(theta2-theta_x)}
///              e^{-u^2/4} du / (2 pi),
/// in [0, 1/sqrt(pi)] for theta_x inside the sector.
double n_zero(const Params& params, double theta1, double theta2,
              double theta_x, double r);

/// Direct evaluation of F by adaptive quadrature (relative error 1e-12).
/// Throws OverflowError when br/2 > 700; use log_f_direct then.
double f_direct(const SectorIntegral& si, double r, double theta_x);
double f_direct(const SectorIntegral& si, const Eigen::Vector2d& x);

/// log F computed with the peak exponent factored out; requires the shifted
/// sum to be positive (always the case for nonnegative weights and f > 0).
double log_f_direct(const SectorIntegral& si, double r, double theta_x);

struct LaplaceAsymptotic {
    double leading;             ///< atoms + e^{br/2} f(theta_x) N0 / sqrt(br)
    double r_term_bound_check;  ///< empirical |R| = r |F - leading| e^{-br/2}
};

/// Leading-order Laplace asymptotics of F and the empirical remainder
/// constant; requires r > 1 and theta_x in [theta1, theta2].  All internal
/// differences are formed on e^{-br/2}-scaled quantities.
LaplaceAsymptotic f_asymptotic(const SectorIntegral& si, double r,
                               double theta_x);
LaplaceAsymptotic f_asymptotic(const SectorIntegral& si,
                               const Eigen::Vector2d& x);

/// Diagnostic three-way split of the arc part of F at angular radius delta
/// about theta_x, each piece e^{-br/2}-scaled; their sum equals the scaled
/// arc integral.
struct SectorSplit {
    double inner;       ///< |theta - theta_x| < delta (within the sector)
    double tail_left;   ///< theta < theta_x - delta
    double tail_right;  ///< theta > theta_x + delta
};

SectorSplit f_direct_split(const SectorIntegral& si, double r, double theta_x,
                           double delta = 0.3);

}  // namespace fmcm
