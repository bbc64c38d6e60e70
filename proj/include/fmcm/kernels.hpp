#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fmcm/grid.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

enum class Exec { Serial, Parallel };

/**
 * Second-order discretization of the travelling-graph operator
 *
 *   F[phi] = -tr H / s + H(g, g) / s^3 + c0 - c / s,   s = sqrt(1 + |g|^2),
 *
 * with central differences for g and H on a uniform grid.  The parallel
 * path partitions rows between threads; every node is written by exactly
 * one thread with no reductions, so Serial and Parallel results are
 * bitwise identical.
 */

/// Pointwise operator value from gradient and Hessian.
double graph_operator(const Params& params, const Eigen::Vector2d& grad,
                      const Eigen::Matrix2d& hess);

/// Residual at all interior nodes; rim entries are exact zeros.
/// out is resized to nx * ny, same layout as field.values.
void assemble_residual(const GridField& phi, const Params& params, Exec exec,
                       std::vector<double>& out);

int interior_count(const GridField& field);

/// Column index of an interior node in the Newton system.
inline int interior_index(const GridField& field, int i, int j) {
    return (j - 1) * (field.nx - 2) + (i - 1);
}

/// Jacobian of the interior residual with respect to interior values.
/// Emits exactly 9 triplets per node in a fixed order (padding entries are
/// zeros on the diagonal), so the assembled matrix is deterministic.
void assemble_jacobian(const GridField& phi, const Params& params, Exec exec,
                       std::vector<Eigen::Triplet<double>>& out);

/// Fills every node from fn.  fn must be safe to call concurrently.
void sample_field(GridField& field,
                  const std::function<double(const Eigen::Vector2d&)>& fn,
                  Exec exec);

}  // namespace fmcm
