#include "fmcm/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcm/quadrature.hpp"

namespace fmcm {
namespace {

/// Angular distance from theta to the closed arc [lo, hi] (0 when inside).
double arc_angle_gap(double theta, double lo, double hi) {
    if (hi - lo >= 2 * std::numbers::pi) return 0.0;
    const double offset = wrap_angle(theta - lo);
    if (offset <= hi - lo) return 0.0;
    return std::min(angular_distance(theta, lo), angular_distance(theta, hi));
}

}  // namespace

MomentBundle moments(const SphereMeasure& mu, const Params& params,
                     const Eigen::VectorXd& x) {
    validate(mu);
    const int d = params.dim - 1;
    if (mu.dim != params.dim)
        throw DomainError("moments: measure and params dimension mismatch");
    if (x.size() != d) throw DomainError("moments: point has wrong dimension");

    const double half_b = 0.5 * params.b;

    // Largest exponent over the support, factored out of every integral.
    double s_max = -std::numeric_limits<double>::infinity();
    for (const auto& a : mu.atoms) s_max = std::max(s_max, x.dot(a.nu));
    double r = 0.0, theta_x = 0.0;
    if (!mu.arcs.empty()) {
        const PolarPoint px = to_polar(Eigen::Vector2d(x(0), x(1)));
        r = px.r;
        theta_x = px.theta;
        for (const auto& arc : mu.arcs) {
            const double gap = arc_angle_gap(theta_x, arc.theta_lo, arc.theta_hi);
            s_max = std::max(s_max, r * std::cos(gap));
        }
    }

    double F1 = 0.0;
    Eigen::VectorXd Fnu = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd Fnunu = Eigen::MatrixXd::Zero(d, d);

    for (const auto& a : mu.atoms) {
        const double w = a.mass * std::exp(half_b * (x.dot(a.nu) - s_max));
        F1 += w;
        Fnu += w * a.nu;
        Fnunu += w * (a.nu * a.nu.transpose());
    }

    if (!mu.arcs.empty()) {
        // First pass fixes the scale F1, second pass integrates the trig
        // moments against an absolute tolerance tied to that scale.
        std::vector<double> arc_mass(mu.arcs.size());
        for (std::size_t i = 0; i < mu.arcs.size(); ++i) {
            const auto& arc = mu.arcs[i];
            auto weight = [&](double t) {
                return std::exp(half_b * (r * std::cos(t - theta_x) - s_max));
            };
            arc_mass[i] =
                integrate_adaptive(weight, arc.theta_lo, arc.theta_hi, 1e-12).value;
            F1 += arc_mass[i];
        }
        const double abs_tol = 1e-12 * F1;
        for (const auto& arc : mu.arcs) {
            auto moment = [&](auto f) {
                auto integrand = [&](double t) {
                    return std::exp(half_b * (r * std::cos(t - theta_x) - s_max)) *
                           f(t);
                };
                return integrate_adaptive(integrand, arc.theta_lo, arc.theta_hi,
                                          1e-12, abs_tol)
                    .value;
            };
            const double mc = moment([](double t) { return std::cos(t); });
            const double ms = moment([](double t) { return std::sin(t); });
            Fnu(0) += mc;
            Fnu(1) += ms;
            const double mcc = moment([](double t) { return std::cos(t) * std::cos(t); });
            const double mcs = moment([](double t) { return std::cos(t) * std::sin(t); });
            const double mss = moment([](double t) { return std::sin(t) * std::sin(t); });
            Fnunu(0, 0) += mcc;
            Fnunu(0, 1) += mcs;
            Fnunu(1, 0) += mcs;
            Fnunu(1, 1) += mss;
        }
    }

    MomentBundle b;
    b.log_F1 = half_b * s_max + std::log(F1);
    b.ratio_Fnu = Fnu / F1;
    b.ratio_Fnunu = Fnunu / F1;
    return b;
}

double eval_phi_star(const SphereMeasure& mu, const Params& params,
                     const Eigen::VectorXd& x) {
    const MomentBundle m = moments(mu, params, x);
    return -2.0 / (params.c0 * std::sin(params.alpha)) * m.log_F1;
}

Eigen::VectorXd grad_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x) {
    const MomentBundle m = moments(mu, params, x);
    return -params.cot_alpha * m.ratio_Fnu;
}

Eigen::MatrixXd hess_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x) {
    const MomentBundle m = moments(mu, params, x);
    const double scale = params.c0 * std::cos(params.alpha) *
                         std::cos(params.alpha) / (2.0 * std::sin(params.alpha));
    return -scale *
           (m.ratio_Fnunu - m.ratio_Fnu * m.ratio_Fnu.transpose());
}

PhiStarSample sample_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x) {
    const MomentBundle m = moments(mu, params, x);
    const double scale = params.c0 * std::cos(params.alpha) *
                         std::cos(params.alpha) / (2.0 * std::sin(params.alpha));
    PhiStarSample s;
    s.value = -2.0 / (params.c0 * std::sin(params.alpha)) * m.log_F1;
    s.grad = -params.cot_alpha * m.ratio_Fnu;
    s.hess =
        -scale * (m.ratio_Fnunu - m.ratio_Fnu * m.ratio_Fnu.transpose());
    return s;
}

double viscous_eikonal_residual(const SphereMeasure& mu, const Params& params,
                                const Eigen::VectorXd& x) {
    const PhiStarSample s = sample_phi_star(mu, params, x);
    const double rhs = 0.5 * params.c0 * std::sin(params.alpha) *
                       (params.cot_alpha * params.cot_alpha -
                        s.grad.squaredNorm());
    return -s.hess.trace() - rhs;
}

double mcm_operator(const Params& params, const Eigen::VectorXd& grad,
                    const Eigen::MatrixXd& hess) {
    const double s2 = 1.0 + grad.squaredNorm();
    const double s = std::sqrt(s2);
    return -hess.trace() / s + grad.dot(hess * grad) / (s2 * s) + params.c0 -
           params.c / s;
}

double mcm_operator(const C2Field& field, const Params& params,
                    const Eigen::VectorXd& x) {
    const C2Sample s = field(x);
    return mcm_operator(params, s.grad, s.hess);
}

}  // namespace fmcm
