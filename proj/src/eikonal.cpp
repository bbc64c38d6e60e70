#include "fmcm/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fmcm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Eigen::VectorXd> distinct_directions(const PlaneSpec& spec) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& e : spec.entries) {
        bool seen = false;
        for (const auto& nu : out) {
            if ((nu - e.nu).norm() < 1e-12) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(e.nu);
    }
    return out;
}

}  // namespace

PlaneSpec make_plane_spec(const Params& params,
                          std::vector<PlaneSpec::Entry> entries) {
    if (entries.empty()) throw DomainError("make_plane_spec: no entries");
    bool any_finite = false;
    for (const auto& e : entries) {
        if (e.nu.size() != params.dim - 1)
            throw DomainError("make_plane_spec: direction has wrong dimension");
        if (std::fabs(e.nu.norm() - 1.0) > 1e-12)
            throw DomainError("make_plane_spec: direction is not unit");
        if (std::isnan(e.gamma) || e.gamma == -kInf)
            throw DomainError("make_plane_spec: intercept must be finite or +inf");
        if (e.gamma < kInf) any_finite = true;
    }
    if (!any_finite)
        throw DomainError("make_plane_spec: all intercepts are +inf");
    PlaneSpec spec;
    spec.params = params;
    spec.entries = std::move(entries);
    return spec;
}

PlaneSpec make_plane_spec_angles(const Params& params,
                                 const std::vector<double>& thetas,
                                 const std::vector<double>& gammas) {
    if (thetas.size() != gammas.size())
        throw DomainError("make_plane_spec_angles: size mismatch");
    if (params.dim != 3)
        throw DomainError("make_plane_spec_angles: angle form requires N = 3");
    std::vector<PlaneSpec::Entry> entries;
    entries.reserve(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
        entries.push_back({unit_direction(thetas[i]), gammas[i]});
    return make_plane_spec(params, std::move(entries));
}

InfPlanesValue eval_inf_planes(const PlaneSpec& spec, const Eigen::VectorXd& x) {
    if (x.size() != spec.params.dim - 1)
        throw DomainError("eval_inf_planes: point has wrong dimension");
    double best = kInf;
    int arg = -1;
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        const auto& e = spec.entries[i];
        if (e.gamma == kInf) continue;
        double v = -spec.params.cot_alpha * x.dot(e.nu) + e.gamma;
        if (v < best) {
            best = v;
            arg = static_cast<int>(i);
        }
    }
    return {best, arg};
}

double edge_distance(const PlaneSpec& spec, const Eigen::VectorXd& x) {
    if (x.size() != spec.params.dim - 1)
        throw DomainError("edge_distance: point has wrong dimension");
    const auto dirs = distinct_directions(spec);
    if (dirs.size() < 2)
        throw DegenerateSpec("edge_distance: fewer than two distinct directions");

    std::size_t top = 0;
    double max_dot = -kInf;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        double d = x.dot(dirs[i]);
        if (d > max_dot) {
            max_dot = d;
            top = i;
        }
    }

    // x lies on an edge exactly when the maximum is attained twice; otherwise
    // the nearest edge point is the projection onto one of the bisecting
    // hyperplanes (nu_top - nu_j)^perp.
    double best = kInf;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (j == top) continue;
        double gap = max_dot - x.dot(dirs[j]);
        best = std::min(best, gap / (dirs[top] - dirs[j]).norm());
    }
    return best;
}

double direction_separation(const PlaneSpec& spec) {
    const auto dirs = distinct_directions(spec);
    if (dirs.size() < 2)
        throw DegenerateSpec("direction_separation: fewer than two distinct directions");
    double best = kInf;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            best = std::min(best, (dirs[i] - dirs[j]).norm());
    return best;
}

ProfileN3 make_profile(const Params& params, std::vector<double> thetas,
                       std::vector<int> sigmas) {
    if (params.dim != 3) throw DomainError("make_profile: requires N = 3");
    const std::size_t k = thetas.size();
    if (k == 0) throw DomainError("make_profile: no angles");
    if (sigmas.size() != k)
        throw DomainError("make_profile: one sigma per sector is required");
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (!(thetas[i] < thetas[i + 1]))
            throw DomainError("make_profile: angles must be strictly increasing");
    if (!(thetas.back() - thetas.front() < 2 * std::numbers::pi))
        throw DomainError("make_profile: angles must span less than a full turn");
    for (int s : sigmas)
        if (s != 0 && s != 1) throw DomainError("make_profile: sigma must be 0 or 1");
    if (k >= 2) {
        for (std::size_t i = 0; i < k; ++i)
            if (sigmas[i] == 1 && sigmas[(i + 1) % k] == 1)
                throw DomainError("make_profile: adjacent sectors cannot both be flat");
    }
    ProfileN3 p;
    p.params = params;
    p.thetas = std::move(thetas);
    p.sigmas = std::move(sigmas);
    return p;
}

double eval_psi(const ProfileN3& profile, double theta) {
    const auto& th = profile.thetas;
    const std::size_t k = th.size();
    const double cot = profile.params.cot_alpha;
    const double t = th[0] + wrap_angle(theta - th[0]);

    std::size_t i = k - 1;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        if (t < th[j + 1]) {
            i = j;
            break;
        }
    }
    const double lo = th[i];
    const double hi = (i + 1 < k) ? th[i + 1] : th[0] + 2 * std::numbers::pi;

    if (profile.sigmas[i] == 1) return -cot;
    const double mid = 0.5 * (lo + hi);
    return t <= mid ? -cot * std::cos(t - lo) : -cot * std::cos(t - hi);
}

SphereMeasure build_measure_N3(const ProfileN3& profile, double lambda0) {
    if (!(lambda0 > 0.0))
        throw DomainError("build_measure_N3: lambda0 must be positive");
    const auto& th = profile.thetas;
    const std::size_t k = th.size();

    SphereMeasure mu;
    mu.dim = 3;
    if (k == 1 && profile.sigmas[0] == 1) {
        mu.arcs.push_back({th[0], th[0] + 2 * std::numbers::pi});
        return mu;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const double lo = th[i];
        const double hi = (i + 1 < k) ? th[i + 1] : th[0] + 2 * std::numbers::pi;
        if (profile.sigmas[i] == 1) mu.arcs.push_back({lo, hi});
        mu.add_atom_at_angle(lo, lambda0);
        mu.add_atom_at_angle(hi, lambda0);
    }
    return mu;
}

std::vector<Eigen::VectorXd> cover_compact(const CompactSet& set, int depth) {
    if (depth < 0 || depth > 24)
        throw DomainError("cover_compact: depth must lie in [0, 24]");
    const int d = set.ambient_dim;
    if (d < 1) throw DomainError("cover_compact: ambient dimension must be >= 1");

    std::vector<Eigen::VectorXd> reps;

    struct Cube {
        Eigen::VectorXd lo;
        double width;
        int level;
    };

    std::vector<Cube> stack;
    stack.push_back({Eigen::VectorXd::Constant(d, -1.0), 2.0, 0});
    bool root_kept = false;

    while (!stack.empty()) {
        Cube cube = std::move(stack.back());
        stack.pop_back();

        Eigen::VectorXd center =
            cube.lo + Eigen::VectorXd::Constant(d, 0.5 * cube.width);
        Eigen::VectorXd nearest = set.closest(center);
        const double half_diag = 0.5 * cube.width * std::sqrt(double(d));
        if ((center - nearest).norm() > half_diag) continue;

        if (cube.level == 0) root_kept = true;
        reps.push_back(nearest);

        if (cube.level == depth) continue;
        const double w = 0.5 * cube.width;
        for (int mask = 0; mask < (1 << d); ++mask) {
            Cube child;
            child.lo = cube.lo;
            for (int j = 0; j < d; ++j)
                if (mask & (1 << j)) child.lo(j) += w;
            child.width = w;
            child.level = cube.level + 1;
            stack.push_back(std::move(child));
        }
    }

    if (!root_kept)
        throw EmptySet("cover_compact: the set misses the root cube");
    return reps;
}

}  // namespace fmcm
