#include "fmcm/cone.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "fmcm/errors.hpp"
#include "fmcm/ode.hpp"

namespace fmcm {
namespace {

constexpr double kR0 = 1e-6;

double slope_rhs(const Params& p, double r, double v) {
    const double w = 1.0 + v * v;
    return w * (p.c0 * std::sqrt(w) - p.c - v / r);
}

/// Cubic Hermite on one panel with exact endpoint derivatives.
double hermite(double r, double r_lo, double r_hi, double y_lo, double y_hi,
               double d_lo, double d_hi) {
    const double h = r_hi - r_lo;
    const double t = (r - r_lo) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_lo + (t3 - 2 * t2 + t) * h * d_lo +
           (-2 * t3 + 3 * t2) * y_hi + (t3 - t2) * h * d_hi;
}

std::size_t locate(const std::vector<double>& grid, double r) {
    auto it = std::upper_bound(grid.begin(), grid.end(), r);
    std::size_t i = it - grid.begin();
    if (i == 0) return 0;
    if (i >= grid.size()) return grid.size() - 2;
    return i - 1;
}

void check_range(const ConeProfile& profile, double r) {
    if (r < 0.0) throw DomainError("cone profile: negative radius");
    const double rm = profile.r_max();
    if (r > rm * (1.0 + 1e-12))
        throw OutOfRange("cone profile: radius beyond the stored grid");
}

/// (v, phi) at a radius inside the grid, series values below r0.
std::pair<double, double> eval_profile(const ConeProfile& profile, double r) {
    const Params& p = profile.params;
    if (p.alpha == std::numbers::pi / 2) return {0.0, 0.0};
    const double a = 0.5 * (p.c0 - p.c);
    if (r <= profile.r0) return {a * r, 0.5 * a * r * r};
    const std::size_t i = locate(profile.r, r);
    const double r_lo = profile.r[i], r_hi = profile.r[i + 1];
    const double d_lo = slope_rhs(p, r_lo, profile.v[i]);
    const double d_hi = slope_rhs(p, r_hi, profile.v[i + 1]);
    const double v =
        hermite(r, r_lo, r_hi, profile.v[i], profile.v[i + 1], d_lo, d_hi);
    const double phi = hermite(r, r_lo, r_hi, profile.phi[i], profile.phi[i + 1],
                               profile.v[i], profile.v[i + 1]);
    return {v, phi};
}

}  // namespace

double v0_bracket(const Params& params, double r) {
    if (!(r > 0.0)) throw DomainError("v0_bracket: radius must be positive");
    const double gap2 = params.c * params.c - params.c0 * params.c0;
    return -gap2 /
           (params.c / r + params.c0 * std::sqrt(1.0 / (r * r) + gap2));
}

ConeProfile solve_cone(const Params& params, double r_max, double tol) {
    if (!(r_max >= 10.0)) throw DomainError("solve_cone: r_max must be >= 10");
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw DomainError("solve_cone: tol must lie in [1e-13, 1e-6]");

    ConeProfile profile;
    profile.params = params;
    profile.r0 = kR0;

    if (params.alpha == std::numbers::pi / 2) {
        profile.r = {0.0, r_max};
        profile.v = {0.0, 0.0};
        profile.phi = {0.0, 0.0};
        profile.C_raw = 0.0;
        profile.C_raw_error = 0.0;
        return profile;
    }

    const double a = 0.5 * (params.c0 - params.c);
    std::array<double, 2> y = {a * kR0, 0.5 * a * kR0 * kR0};
    profile.r.push_back(kR0);
    profile.v.push_back(y[0]);
    profile.phi.push_back(y[1]);

    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    opt.h_init = 1e-7;
    opt.h_max = 5.0;

    std::function<std::array<double, 2>(double, const std::array<double, 2>&)>
        rhs = [&params](double r, const std::array<double, 2>& s) {
            return std::array<double, 2>{slope_rhs(params, r, s[0]), s[0]};
        };
    std::function<void(double, const std::array<double, 2>&)> record =
        [&](double r, const std::array<double, 2>& s) {
            if (s[0] > 10.0 * tol || s[0] < v0_bracket(params, r) - 10.0 * tol)
                throw BracketViolation("solve_cone: slope left its bracket");
            profile.r.push_back(r);
            profile.v.push_back(s[0]);
            profile.phi.push_back(s[1]);
        };

    integrate_dp45<2>(rhs, kR0, r_max, y, opt, record);
    return profile;
}

double cone_constant(ConeProfile& profile) {
    const Params& p = profile.params;
    if (p.alpha == std::numbers::pi / 2) {
        profile.C_raw = 0.0;
        profile.C_raw_error = 0.0;
        return 0.0;
    }
    const double rm = profile.r_max();
    if (!(rm >= 200.0))
        throw DomainError("cone_constant: requires r_max >= 200");

    const double third = (2.0 - 3.0 * std::sin(p.alpha) * std::sin(p.alpha)) /
                         (p.c0 * p.c0 * std::sin(2.0 * p.alpha));
    auto matched = [&](double r) {
        return eval_profile(profile, r).second + p.cot_alpha * r -
               std::log(r) / (p.c0 * std::sin(p.alpha)) - third / r;
    };
    const double e1 = matched(rm);
    const double e2 = matched(rm / 2);
    const double e3 = matched(rm / 4);
    const double c1 = (4.0 * e1 - e2) / 3.0;
    const double c2 = (4.0 * e2 - e3) / 3.0;
    if (std::fabs(c1 - c2) > 1e-4)
        throw PoorConvergence("cone_constant: extrapolants disagree");
    profile.C_raw = c1;
    profile.C_raw_error = std::fabs(c1 - c2);
    return c1;
}

double cone_reference_constant(const Params& params) {
    if (params.alpha == std::numbers::pi / 2)
        throw DomainError("cone_reference_constant: undefined for alpha = pi/2");
    return std::log(std::numbers::pi * params.c0 * std::cos(params.alpha)) /
           (params.c0 * std::sin(params.alpha));
}

double eval_v(const ConeProfile& profile, double r) {
    check_range(profile, r);
    return eval_profile(profile, std::min(r, profile.r_max())).first;
}

double eval_phi_baseline(const ConeProfile& profile, double r) {
    check_range(profile, r);
    return eval_profile(profile, std::min(r, profile.r_max())).second;
}

double eval_phi_c(const ConeProfile& profile, double r, double target_c) {
    check_range(profile, r);
    const double base = eval_profile(profile, std::min(r, profile.r_max())).second;
    if (profile.params.alpha == std::numbers::pi / 2) return base;
    return base + (target_c - profile.C_raw);
}

double theta_bar(const ConeProfile& profile, double r, double phi_c0) {
    (void)phi_c0;  // the height difference below cancels any normalization
    const Params& p = profile.params;
    if (!(r > 0.0)) throw DomainError("theta_bar: radius must be positive");
    if (p.alpha == std::numbers::pi / 2)
        throw DomainError("theta_bar: undefined for the planar profile");
    check_range(profile, r);
    const double drop = eval_profile(profile, r).second;  // phi(r) - phi(0)
    double arg = drop / (-r * p.cot_alpha);
    if (arg < -1e-10 || arg > 1.0 + 1e-10)
        throw DomainError("theta_bar: cosine argument out of range");
    arg = std::clamp(arg, 0.0, 1.0);
    return std::acos(arg);
}

}  // namespace fmcm
