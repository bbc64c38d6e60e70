#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "fmcm/errors.hpp"

namespace fmcm {

/**
 * Parameter pack for a travelling front moving with normal velocity
 * V = -c0 + curvature.  The wave speed c, the half angle alpha of the
 * asymptotic cone and the exponential rate b are tied together by
 *
 *     c = c0 / sin(alpha),   b = c0 * cos(alpha),
 *     cot(alpha) = sqrt((c/c0)^2 - 1).
 *
 * alpha = pi/2 is the planar limit: cot_alpha = b = 0 and c = c0.
 */
struct Params {
    double alpha;      ///< cone half angle, in (0, pi/2]
    double c0;         ///< forcing speed, > 0
    double c;          ///< vertical wave speed c0/sin(alpha)
    double b;          ///< exponential rate c0*cos(alpha)
    double cot_alpha;  ///< asymptotic slope of the profile
    int dim;           ///< ambient dimension N >= 2; the graph lives over R^{N-1}
};

/// Point of R^2 in polar coordinates, theta normalized to [0, 2*pi).
struct PolarPoint {
    double r;
    double theta;
};

inline Params make_params(double alpha, double c0, int dim) {
    if (!(alpha > 0.0) || !(alpha <= std::numbers::pi / 2))
        throw DomainError("make_params: alpha must lie in (0, pi/2]");
    if (!(c0 > 0.0))
        throw DomainError("make_params: c0 must be positive");
    if (dim < 2)
        throw DomainError("make_params: dimension must be at least 2");
    Params p;
    p.alpha = alpha;
    p.c0 = c0;
    p.c = c0 / std::sin(alpha);
    p.b = c0 * std::cos(alpha);
    p.cot_alpha = std::cos(alpha) / std::sin(alpha);
    p.dim = dim;
    return p;
}

inline PolarPoint to_polar(const Eigen::Vector2d& x) {
    if (x.x() == 0.0 && x.y() == 0.0) return {0.0, 0.0};
    double theta = std::atan2(x.y(), x.x());
    if (theta < 0.0) theta += 2 * std::numbers::pi;
    if (theta >= 2 * std::numbers::pi) theta = 0.0;
    return {x.norm(), theta};
}

inline Eigen::Vector2d from_polar(const PolarPoint& p) {
    return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

/// Unit direction of S^1 at angle theta, as a vector of R^2.
inline Eigen::Vector2d unit_direction(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

/// Angle normalized to [0, 2*pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, 2 * std::numbers::pi);
    if (t < 0.0) t += 2 * std::numbers::pi;
    return t;
}

/// Unsigned angular distance between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return d > std::numbers::pi ? 2 * std::numbers::pi - d : d;
}

}  // namespace fmcm
