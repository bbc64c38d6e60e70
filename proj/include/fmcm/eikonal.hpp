#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

/**
 * Finite family of affine viscosity solutions of |D(phi)| = cot(alpha),
 *
 *     phi_i(x) = -cot(alpha) * (x . nu_i) + gamma_i,
 *
 * whose pointwise infimum is again a viscosity solution.  gamma_i = +inf is
 * allowed and marks a plane that never participates in the envelope.
 */
struct PlaneSpec {
    struct Entry {
        Eigen::VectorXd nu;  ///< unit direction in R^{N-1}
        double gamma;        ///< intercept, may be +inf
    };

    Params params;
    std::vector<Entry> entries;
};

/// Validating factory; at least one finite intercept is required and every
/// direction must be unit within 1e-12.
PlaneSpec make_plane_spec(const Params& params,
                          std::vector<PlaneSpec::Entry> entries);

/// Convenience for N = 3: directions given by angles on S^1.
PlaneSpec make_plane_spec_angles(const Params& params,
                                 const std::vector<double>& thetas,
                                 const std::vector<double>& gammas);

struct InfPlanesValue {
    double value;
    int argmin;  ///< index of the attaining entry, smallest on ties
};

InfPlanesValue eval_inf_planes(const PlaneSpec& spec, const Eigen::VectorXd& x);

/**
 * Exact distance from x to the edge set E of the envelope, the set of points
 * where max_i (x . nu_i) is attained by two distinct directions.  Entries
 * with duplicate directions are collapsed first; gamma plays no role here.
 * Throws DegenerateSpec when fewer than two distinct directions remain.
 */
double edge_distance(const PlaneSpec& spec, const Eigen::VectorXd& x);

/// Smallest pairwise gap min_{i != j} |nu_i - nu_j| over distinct directions.
double direction_separation(const PlaneSpec& spec);

/**
 * One-homogeneous solution profile on S^1 (N = 3).  The circle is split by
 * angles theta_1 < ... < theta_k < theta_1 + 2*pi into sectors
 * [theta_i, theta_{i+1}]; on sector i the profile is
 *
 *     sigma_i = 1 :  psi = -cot(alpha)
 *     sigma_i = 0 :  psi = -cot(alpha) * cos(theta - theta_i)      (first half)
 *                    psi = -cot(alpha) * cos(theta - theta_{i+1})  (second half)
 *
 * For k >= 2 adjacent sectors may not both carry sigma = 1 (cyclically).
 */
struct ProfileN3 {
    Params params;
    std::vector<double> thetas;  ///< strictly increasing, spread < 2*pi
    std::vector<int> sigmas;     ///< 0 or 1, one per sector
};

ProfileN3 make_profile(const Params& params, std::vector<double> thetas,
                       std::vector<int> sigmas);

/// Profile value at an angle; x -> r * eval_psi(theta_x) is the
/// one-homogeneous solution.
double eval_psi(const ProfileN3& profile, double theta);

/**
 * Measure whose exponential transform realizes the profile at infinity:
 * sigma_i = 1 sectors contribute their arc plus atoms lambda0 at both
 * endpoints, sigma_i = 0 sectors contribute the endpoint atoms only.
 * Exception: k = 1 with sigma = 1 is the full circle without atoms.
 */
SphereMeasure build_measure_N3(const ProfileN3& profile, double lambda0);

/**
 * Compact subset K of S^{N-2} described by its nearest-point map; closest(y)
 * must return some point of K at minimal distance from y (any y of R^{N-1},
 * not only unit vectors).
 */
struct CompactSet {
    int ambient_dim;  ///< N - 1
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> closest;
};

/**
 * Dyadic covering of K: starting from [-1, 1]^{N-1}, cubes are subdivided
 * "depth" times; a cube is kept when its center lies within half the cube
 * diagonal of K, and contributes the point of K closest to its center.  The
 * returned directions (all in K, one per retained cube, every level) cover
 * K with radius sqrt(N-1) * 2^(1-depth).
 */
std::vector<Eigen::VectorXd> cover_compact(const CompactSet& set, int depth);

}  // namespace fmcm
