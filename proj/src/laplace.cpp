#include "fmcm/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcm/errors.hpp"
#include "fmcm/quadrature.hpp"

namespace fmcm {
namespace {

/// Arc integral of e^{(br/2)(cos(theta - theta_x) - 1)} f(theta) / (2 pi)
/// over [lo, hi]; the shift by the peak exponent keeps the integrand <= |f|.
double scaled_arc(const SectorIntegral& si, double r, double theta_x,
                  double lo, double hi) {
    if (!(lo < hi)) return 0.0;
    const double half_br = 0.5 * si.params.b * r;
    auto integrand = [&](double t) {
        return std::exp(half_br * (std::cos(t - theta_x) - 1.0)) * si.f(t) /
               (2 * std::numbers::pi);
    };
    // Tolerance is absolute against the sector scale: f may vanish or change
    // sign, and far tails are exponentially small relative to the peak.
    const double abs_tol = 1e-15 * (hi - lo);
    return integrate_adaptive(integrand, lo, hi, 1e-12, abs_tol).value;
}

double scaled_atoms(const SectorIntegral& si, double r, double theta_x) {
    const double half_br = 0.5 * si.params.b * r;
    return si.lambda1 * std::exp(half_br * (std::cos(si.theta1 - theta_x) - 1.0)) +
           si.lambda2 * std::exp(half_br * (std::cos(si.theta2 - theta_x) - 1.0));
}

}  // namespace

SectorIntegral make_sector_integral(const Params& params, double theta1,
                                    double theta2, double lambda1,
                                    double lambda2,
                                    std::function<double(double)> f) {
    if (!(theta1 < theta2))
        throw DomainError("make_sector_integral: requires theta1 < theta2");
    SectorIntegral si;
    si.params = params;
    si.theta1 = theta1;
    si.theta2 = theta2;
    si.lambda1 = lambda1;
    si.lambda2 = lambda2;
    if (f) si.f = std::move(f);
    return si;
}

double g_map(const Params& params, double theta) {
    const double root_b = std::sqrt(params.b);
    if (theta >= std::numbers::pi) return 2.0 * root_b;
    if (theta <= -std::numbers::pi) return -2.0 * root_b;
    return 2.0 * root_b * std::sin(0.5 * theta);
}

double g_inverse(const Params& params, double t) {
    const double cap = 2.0 * std::sqrt(params.b);
    if (std::fabs(t) > cap)
        throw DomainError("g_inverse: |t| exceeds 2 sqrt(b)");
    return 2.0 * std::asin(t / cap);
}

double n_zero(const Params& params, double theta1, double theta2,
              double theta_x, double r) {
    if (!(r > 0.0)) throw DomainError("n_zero: radius must be positive");
    const double u1 = std::sqrt(r) * g_map(params, theta1 - theta_x);
    const double u2 = std::sqrt(r) * g_map(params, theta2 - theta_x);
    // integral of e^{-u^2/4} is sqrt(pi) erf(u/2)
    return (std::erf(0.5 * u2) - std::erf(0.5 * u1)) /
           (2.0 * std::sqrt(std::numbers::pi));
}

double f_direct(const SectorIntegral& si, double r, double theta_x) {
    const double half_br = 0.5 * si.params.b * r;
    if (half_br > 700.0)
        throw OverflowError("f_direct: exponent too large, use log_f_direct");
    const double scaled = scaled_atoms(si, r, theta_x) +
                          scaled_arc(si, r, theta_x, si.theta1, si.theta2);
    return std::exp(half_br) * scaled;
}

double f_direct(const SectorIntegral& si, const Eigen::Vector2d& x) {
    const PolarPoint p = to_polar(x);
    return f_direct(si, p.r, p.theta);
}

double log_f_direct(const SectorIntegral& si, double r, double theta_x) {
    const double scaled = scaled_atoms(si, r, theta_x) +
                          scaled_arc(si, r, theta_x, si.theta1, si.theta2);
    if (!(scaled > 0.0))
        throw DomainError("log_f_direct: F is not positive");
    return 0.5 * si.params.b * r + std::log(scaled);
}

LaplaceAsymptotic f_asymptotic(const SectorIntegral& si, double r,
                               double theta_x) {
    if (!(r > 1.0)) throw DomainError("f_asymptotic: requires r > 1");
    if (theta_x < si.theta1 || theta_x > si.theta2)
        throw DomainError("f_asymptotic: theta_x outside the sector");

    const double half_br = 0.5 * si.params.b * r;
    const double atoms = scaled_atoms(si, r, theta_x);
    const double window = si.f(theta_x) *
                          n_zero(si.params, si.theta1, si.theta2, theta_x, r) /
                          std::sqrt(si.params.b * r);
    const double direct = atoms + scaled_arc(si, r, theta_x, si.theta1, si.theta2);

    LaplaceAsymptotic out;
    out.r_term_bound_check = r * std::fabs(direct - (atoms + window));
    out.leading = half_br > 700.0
                      ? std::numeric_limits<double>::infinity()
                      : std::exp(half_br) * (atoms + window);
    return out;
}

LaplaceAsymptotic f_asymptotic(const SectorIntegral& si,
                               const Eigen::Vector2d& x) {
    const PolarPoint p = to_polar(x);
    return f_asymptotic(si, p.r, p.theta);
}

SectorSplit f_direct_split(const SectorIntegral& si, double r, double theta_x,
                           double delta) {
    if (!(delta > 0.0)) throw DomainError("f_direct_split: delta must be positive");
    const double lo = std::clamp(theta_x - delta, si.theta1, si.theta2);
    const double hi = std::clamp(theta_x + delta, si.theta1, si.theta2);
    SectorSplit s;
    s.tail_left = scaled_arc(si, r, theta_x, si.theta1, lo);
    s.inner = scaled_arc(si, r, theta_x, lo, hi);
    s.tail_right = scaled_arc(si, r, theta_x, hi, si.theta2);
    return s;
}

}  // namespace fmcm
