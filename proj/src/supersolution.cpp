#include "fmcm/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcm/subsolution.hpp"

namespace fmcm {

double weight_intercept(const Params& params, double lambda) {
    if (lambda < 0.0)
        throw DomainError("weight_intercept: weight must be nonnegative");
    if (lambda == 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 / (params.c0 * std::sin(params.alpha)) * std::log(lambda);
}

PlaneSpec plane_spec_from_weights(
    const Params& params,
    const std::vector<std::pair<Eigen::VectorXd, double>>& weighted_dirs) {
    std::vector<PlaneSpec::Entry> entries;
    entries.reserve(weighted_dirs.size());
    for (const auto& [nu, lambda] : weighted_dirs)
        entries.push_back({nu, weight_intercept(params, lambda)});
    return make_plane_spec(params, std::move(entries));
}

double eval_edge(const Params& params, double theta1, double theta2,
                 double lambda1, double lambda2, const Eigen::Vector2d& x) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw DomainError("eval_edge: weights must be positive");
    const double p1 = -params.cot_alpha * x.dot(unit_direction(theta1)) +
                      weight_intercept(params, lambda1);
    const double p2 = -params.cot_alpha * x.dot(unit_direction(theta2)) +
                      weight_intercept(params, lambda2);
    return std::min(p1, p2);
}

double eval_planes_inf(const PlaneSpec& spec, const Eigen::VectorXd& x) {
    return eval_inf_planes(spec, x).value;
}

ArcPiece make_arc_piece(const Params& params, double theta1, double theta2,
                        double lambda,
                        std::shared_ptr<const ConeProfile> profile) {
    if (!(theta1 < theta2)) throw DomainError("make_arc_piece: theta1 < theta2 required");
    if (!(lambda > 0.0)) throw DomainError("make_arc_piece: lambda must be positive");
    if (!profile) throw DomainError("make_arc_piece: missing cone profile");
    ArcPiece piece;
    piece.params = params;
    piece.theta1 = theta1;
    piece.theta2 = theta2;
    piece.lambda = lambda;
    piece.profile = std::move(profile);
    piece.value_at_origin = weight_intercept(params, lambda);
    return piece;
}

double eval_arc(const ArcPiece& piece, const Eigen::Vector2d& x) {
    const PolarPoint px = to_polar(x);
    if (px.r == 0.0) return piece.value_at_origin;

    const double edge = eval_edge(piece.params, piece.theta1, piece.theta2,
                                  piece.lambda, piece.lambda, x);
    // Sector membership is angular, modulo 2 pi.
    const double span = piece.theta2 - piece.theta1;
    const double offset = wrap_angle(px.theta - piece.theta1);
    if (offset <= 0.0 || offset >= span) return edge;

    const double cone =
        eval_phi_baseline(*piece.profile, px.r) + piece.value_at_origin;
    return std::min(cone, edge);
}

GlobalSuperN3 assemble_global_N3(std::shared_ptr<const ConeProfile> cone,
                                 const ProfileN3& profile, double lambda0,
                                 const Params& params) {
    const std::size_t k = profile.thetas.size();
    if (k < 2) throw DomainError("assemble_global_N3: requires k >= 2 sectors");
    if (!(lambda0 > 0.0))
        throw DomainError("assemble_global_N3: lambda0 must be positive");

    GlobalSuperN3 gs;
    gs.params = params;
    gs.profile = profile;
    gs.lambda0 = lambda0;
    gs.cone = cone;
    gs.piece_kind.resize(k);
    gs.arc_index.assign(k, -1);

    for (std::size_t i = 0; i < k; ++i) {
        const double lo = profile.thetas[i];
        const double hi = (i + 1 < k) ? profile.thetas[i + 1]
                                      : profile.thetas[0] + 2 * std::numbers::pi;
        gs.piece_kind[i] = profile.sigmas[i];
        if (profile.sigmas[i] == 1) {
            if (!cone)
                throw DomainError("assemble_global_N3: arc sectors need a cone profile");
            gs.arc_index[i] = static_cast<int>(gs.arc_pieces.size());
            gs.arc_pieces.push_back(
                make_arc_piece(params, lo, hi, 2.0 * lambda0, cone));
        }
    }

    // Empirical constant: smallest shift putting the matching sub-solution
    // below the assembled envelope on a fixed polar sample grid.
    const SphereMeasure mu = build_measure_N3(profile, lambda0);
    double r_cap = 100.0;
    if (cone) r_cap = std::min(r_cap, cone->r_max());
    double sup_gap = 0.0;
    gs.C = 0.0;
    for (int ir = 0; ir < 64; ++ir) {
        const double r = r_cap * std::pow(2.0, -0.25 * (63 - ir));
        for (int ia = 0; ia < 128; ++ia) {
            const double t = 2 * std::numbers::pi * ia / 128.0;
            const Eigen::Vector2d x = r * unit_direction(t);
            const double low = eval_phi_star(mu, params, x);
            const double high = eval_global(gs, x);
            sup_gap = std::max(sup_gap, low - high);
        }
    }
    gs.C = std::max(0.0, sup_gap) + 1e-6;
    return gs;
}

double eval_global_piece(const GlobalSuperN3& gs, std::size_t i,
                         const Eigen::Vector2d& x) {
    const std::size_t k = gs.profile.thetas.size();
    if (i >= k) throw DomainError("eval_global_piece: sector index out of range");
    const double lo = gs.profile.thetas[i];
    const double hi = (i + 1 < k) ? gs.profile.thetas[i + 1]
                                  : gs.profile.thetas[0] + 2 * std::numbers::pi;
    if (gs.piece_kind[i] == 1)
        return eval_arc(gs.arc_pieces[gs.arc_index[i]], x);
    return eval_edge(gs.params, lo, hi, 2.0 * gs.lambda0, 2.0 * gs.lambda0, x);
}

double eval_global(const GlobalSuperN3& gs, const Eigen::Vector2d& x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gs.profile.thetas.size(); ++i)
        best = std::min(best, eval_global_piece(gs, i, x));
    return best + gs.C;
}

SandwichReport sandwich_report(const ScalarField2& phi_low,
                               const ScalarField2& phi_high,
                               const std::vector<Eigen::Vector2d>& samples,
                               const PlaneSpec* edge_ref) {
    if (samples.empty()) throw DomainError("sandwich_report: no samples");
    SandwichReport rep;
    rep.min_gap = std::numeric_limits<double>::infinity();
    rep.max_gap = -std::numeric_limits<double>::infinity();
    rep.argmin = samples.front();
    for (const auto& x : samples) {
        const double gap = phi_high(x) - phi_low(x);
        if (gap < rep.min_gap) {
            rep.min_gap = gap;
            rep.argmin = x;
        }
        rep.max_gap = std::max(rep.max_gap, gap);
        if (edge_ref)
            rep.gap_by_edge_distance.emplace_back(edge_distance(*edge_ref, x),
                                                  gap);
    }
    rep.worst_violation = std::max(0.0, -rep.min_gap);
    return rep;
}

}  // namespace fmcm
