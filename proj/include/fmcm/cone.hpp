#pragma once

#include <limits>
#include <vector>

#include "fmcm/params.hpp"

namespace fmcm {

/**
 * Radially symmetric travelling graph phi_c(|x|).  The slope v = phi_c'
 * solves
 *
 *     v' = (1 + v^2) (c0 sqrt(1 + v^2) - c - v/r),   v(0) = 0,
 *
 * and phi_c is stored with the baseline phi_c(0) = 0; constants are applied
 * on evaluation.  For large r
 *
 *     phi_c(r) = -cot(alpha) r + ln(r)/(c0 sin(alpha)) + C_raw
 *                + (2 - 3 sin(alpha)^2)/(c0^2 sin(2 alpha) r) + O(1/r^2).
 */
struct ConeProfile {
    Params params;
    double r0 = 0.0;          ///< series start of the integration
    std::vector<double> r;    ///< increasing grid from r0 to r_max
    std::vector<double> v;    ///< slope at the grid radii, in [-cot(alpha), 0]
    std::vector<double> phi;  ///< profile at the grid radii, phi(0) = 0
    double C_raw = std::numeric_limits<double>::quiet_NaN();
    double C_raw_error = std::numeric_limits<double>::quiet_NaN();

    double r_max() const { return r.empty() ? 0.0 : r.back(); }
};

/// Explicit lower bracket v0(r) <= v(r) <= 0,
///     v0(r) = -(c^2 - c0^2) / (c/r + c0 sqrt(1/r^2 + c^2 - c0^2)).
double v0_bracket(const Params& params, double r);

/**
 * Integrates the slope equation from r0 = 1e-6 (series start
 * v(r0) = (c0 - c) r0 / 2) to r_max with an embedded Dormand-Prince 5(4)
 * pair at per-step tolerance tol, carrying phi alongside v.  alpha = pi/2
 * yields the zero profile.
 */
ConeProfile solve_cone(const Params& params, double r_max, double tol);

/**
 * Asymptotic constant C_raw of the stored baseline, estimated by Richardson
 * extrapolation (in 1/r^2) of
 *
 *     E(r) = phi(r) + cot(alpha) r - ln(r)/(c0 sin(alpha))
 *            - (2 - 3 sin(alpha)^2)/(c0^2 sin(2 alpha) r)
 *
 * at the largest stored radii.  Stores C_raw and its error estimate in the
 * profile and returns C_raw.  Requires r_max >= 200; alpha = pi/2 gives 0.
 */
double cone_constant(ConeProfile& profile);

/// Reference normalization ln(pi c0 cos(alpha)) / (c0 sin(alpha)), the
/// asymptotic constant tied to the full-circle measure of unit total mass.
double cone_reference_constant(const Params& params);

/// v(r) by monotone cubic interpolation on the stored grid (series value
/// below r0).  Requires 0 <= r <= r_max.
double eval_v(const ConeProfile& profile, double r);

/// Stored-baseline profile value (phi(0) = 0), no constant applied.
double eval_phi_baseline(const ConeProfile& profile, double r);

/// Profile shifted so that its asymptotic constant equals target_c:
/// returns phi(r) + (target_c - C_raw).  cone_constant must have run unless
/// target_c is taken as C_raw via shift 0; requires 0 <= r <= r_max.
double eval_phi_c(const ConeProfile& profile, double r, double target_c);

/**
 * Opening angle theta_bar(r) = arccos((phi_c(r) - phi_c(0)) / (-r cot(alpha)))
 * of the cone at radius r; decreasing in r with limit pi/2 at r = 0.  The
 * value does not depend on the profile normalization; phi_c0 states the
 * caller's normalization for interface symmetry with the shifted profiles.
 */
double theta_bar(const ConeProfile& profile, double r, double phi_c0 = 0.0);

}  // namespace fmcm
