#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fmcm/cone.hpp"
#include "fmcm/eikonal.hpp"
#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

/// Intercept of the plane attached to an atom of mass lambda:
/// gamma = -(2/(c0 sin(alpha))) ln(lambda).
double weight_intercept(const Params& params, double lambda);

/// PlaneSpec whose intercepts come from atom weights (lambda > 0; lambda = 0
/// yields gamma = +inf, a plane that never participates).
PlaneSpec plane_spec_from_weights(
    const Params& params,
    const std::vector<std::pair<Eigen::VectorXd, double>>& weighted_dirs);

/// Two-plane super-solution through directions theta1, theta2 with weights
/// lambda1, lambda2: min of p_i(x) = -cot(alpha) x . nu_i + weight_intercept.
double eval_edge(const Params& params, double theta1, double theta2,
                 double lambda1, double lambda2, const Eigen::Vector2d& x);

/// Infimum of weighted planes; spec intercepts already encode the weights.
double eval_planes_inf(const PlaneSpec& spec, const Eigen::VectorXd& x);

/**
 * Super-solution gluing two planes through a circular sector: equal to the
 * edge min(p1, p2) outside the sector (theta1, theta2) and to
 * min(cone, edge) inside, with the shared cone profile shifted so that
 * phi_c(0) equals the common plane value -(2/(c0 sin(alpha))) ln(lambda)
 * at the origin.
 */
struct ArcPiece {
    Params params;
    double theta1;
    double theta2;
    double lambda;
    std::shared_ptr<const ConeProfile> profile;
    double value_at_origin;  ///< the normalization phi_c(0) = phi_e(0)
};

ArcPiece make_arc_piece(const Params& params, double theta1, double theta2,
                        double lambda,
                        std::shared_ptr<const ConeProfile> profile);

double eval_arc(const ArcPiece& piece, const Eigen::Vector2d& x);

/**
 * Global super-solution matching a one-homogeneous N = 3 profile: one piece
 * per sector (arc where sigma = 1, edge where sigma = 0, atom masses
 * 2*lambda0 throughout), evaluated as the infimum over pieces plus a
 * constant lifting it above the matching sub-solution.
 */
struct GlobalSuperN3 {
    Params params;
    ProfileN3 profile;
    double lambda0;
    double C;  ///< additive constant, empirically smallest valid choice
    std::vector<ArcPiece> arc_pieces;    ///< sectors with sigma = 1
    std::vector<int> piece_kind;         ///< per sector: 1 = arc, 0 = edge
    std::vector<int> arc_index;          ///< sector -> index into arc_pieces
    std::shared_ptr<const ConeProfile> cone;
};

/**
 * Builds the per-sector pieces and picks the constant C empirically as
 * max(0, sup of phi_star - inf(pieces)) + 1e-6 over a fixed polar sample
 * grid (64 radii geometric in (0, r_cap], 128 angles).  Requires k >= 2.
 */
GlobalSuperN3 assemble_global_N3(std::shared_ptr<const ConeProfile> cone,
                                 const ProfileN3& profile, double lambda0,
                                 const Params& params);

/// Infimum over pieces, plus the stored constant.
double eval_global(const GlobalSuperN3& gs, const Eigen::Vector2d& x);

/// Value of the piece owning sector i at x (before adding C); used to test
/// that the infimum is attained by the sector containing theta_x.
double eval_global_piece(const GlobalSuperN3& gs, std::size_t i,
                         const Eigen::Vector2d& x);

using ScalarField2 = std::function<double(const Eigen::Vector2d&)>;

struct SandwichReport {
    double min_gap;          ///< min of high - low over the samples
    double max_gap;
    double worst_violation;  ///< max(0, -min_gap)
    Eigen::Vector2d argmin;  ///< sample attaining min_gap
    /// (distance to the edge set, gap) per sample when an edge reference
    /// spec is supplied; empty otherwise.
    std::vector<std::pair<double, double>> gap_by_edge_distance;
};

SandwichReport sandwich_report(const ScalarField2& phi_low,
                               const ScalarField2& phi_high,
                               const std::vector<Eigen::Vector2d>& samples,
                               const PlaneSpec* edge_ref = nullptr);

}  // namespace fmcm
