#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fmcm/eikonal.hpp"
#include "fmcm/grid.hpp"
#include "fmcm/kernels.hpp"
#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

struct Rect {
    double a1, b1, a2, b2;
};

/**
 * Newton iteration on the discretized travelling-graph operator, globalized
 * by pseudo-transient continuation: steps solve (I/tau + J) delta = -F and
 * are accepted while the residual stays bounded, with tau grown toward the
 * plain Newton step as the residual falls.  damping scales every step.
 */
struct NewtonOptions {
    int max_iters = 50;        ///< per grid level
    double residual_tol = 1e-10;
    double damping = 1.0;
    int coarse_levels = 2;     ///< grid-sequencing depth; 0 = target grid only
    Exec exec = Exec::Parallel;
    bool trace = false;        ///< per-iteration diagnostics on stderr
};

struct SolveResult {
    GridField field;
    std::vector<double> residual_history;  ///< target level, max norms
    int iterations = 0;                    ///< target level
    int coarse_iterations = 0;             ///< summed over coarser levels
};

/// Interior residual array (rim zeros), same layout as field.values.
std::vector<double> residual_field(const GridField& field, const Params& params);

/**
 * Solves the Dirichlet problem on domain with spacing h.  The rim is fixed
 * to boundary_fn; initial_fn seeds the coarsest grid of the sequencing
 * ladder (the target grid when coarse_levels = 0).  Throws NonConvergence
 * after max_iters on any level or a collapsed pseudo-timestep,
 * LinearSolveFailure if the sparse factorization breaks down.
 */
SolveResult solve_dirichlet(const Rect& domain, double h,
                            const std::function<double(const Eigen::Vector2d&)>& boundary_fn,
                            const std::function<double(const Eigen::Vector2d&)>& initial_fn,
                            const Params& params, const NewtonOptions& opts);

/**
 * Checks phi_star(x) - tol <= field <= inf-planes(x) + tol at every interior
 * node; throws SandwichViolation naming the first offending node.  The decay
 * table reports max |field - inf-planes| over nodes at distance >= l from
 * the edge set, for the given thresholds.
 */
struct SandwichDecayRow {
    double min_edge_distance;
    double max_abs_gap;
    long nodes;
};

struct SandwichCheck {
    double min_lower_margin;  // min over nodes of field - phi_star
    double max_upper_margin;  // max over nodes of field - inf_planes
    double min_upper_margin;  // min over nodes of field - inf_planes (gap depth)
    Eigen::Vector2d argmin_lower;
    Eigen::Vector2d argmax_upper;
    std::vector<SandwichDecayRow> decay;
};

SandwichCheck verify_sandwich(const GridField& field, const SphereMeasure& mu,
                              const PlaneSpec& spec, double tol,
                              const std::vector<double>& decay_thresholds = {2.0, 5.0, 10.0, 15.0});

/// Max over interior nodes of the largest discrete-Hessian eigenvalue.
/// Small positive values are expected for concave fields (O(h) tolerance).
double concavity_probe(const GridField& field);

}  // namespace fmcm
