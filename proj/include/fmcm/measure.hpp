#pragma once

#include <vector>

#include <Eigen/Core>

#include "fmcm/errors.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

/**
 * Nonnegative finite measure on the sphere S^{N-2} of directions, stored as
 * a finite sum of atoms plus, for N = 3 only, finitely many arcs of S^1
 * carrying unit density d(theta).
 */
struct SphereMeasure {
    struct Atom {
        Eigen::VectorXd nu;  ///< unit direction in R^{N-1}
        double mass;         ///< > 0
    };

    /// Arc (theta_lo, theta_hi) of S^1 with density 1 * d(theta),
    /// theta_lo < theta_hi <= theta_lo + 2*pi.
    struct Arc {
        double theta_lo;
        double theta_hi;
    };

    int dim = 3;  ///< ambient dimension N
    std::vector<Atom> atoms;
    std::vector<Arc> arcs;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        for (const auto& arc : arcs) m += arc.theta_hi - arc.theta_lo;
        return m;
    }

    /// Adds mass at a direction of S^1, merging with an existing atom when
    /// the angle coincides modulo 2*pi.
    void add_atom_at_angle(double theta, double mass) {
        const double t = wrap_angle(theta);
        for (auto& a : atoms) {
            if (angular_distance(std::atan2(a.nu(1), a.nu(0)), t) < 1e-14) {
                a.mass += mass;
                return;
            }
        }
        Atom a;
        a.nu = unit_direction(t);
        a.mass = mass;
        atoms.push_back(std::move(a));
    }

    /**
     * Copy of the measure with mass eps added at each of the 2*(N-1)
     * coordinate directions.  Removes unbounded facets from the inf-of-planes
     * envelope while perturbing values by at most O(eps); eps = 0 returns the
     * measure unchanged.
     */
    SphereMeasure regularized(double eps = 1e-3) const;
};

/// Throws unless the measure is usable: positive total mass, unit atom
/// directions of matching dimension, well ordered arcs (N = 3 only).
void validate(const SphereMeasure& mu);

}  // namespace fmcm
