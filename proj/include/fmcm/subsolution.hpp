#pragma once

#include <functional>

#include <Eigen/Core>

#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"

namespace fmcm {

/**
 * Normalized exponential moments of a sphere measure at a point x,
 *
 *     F_f(x) = integral of exp((b/2) x . nu) f(nu) dmu(nu),
 *
 * evaluated with the largest exponent factored out so that only log F_1 and
 * the ratios F_nu / F_1, F_{nu nu^T} / F_1 are ever formed.
 */
struct MomentBundle {
    double log_F1;
    Eigen::VectorXd ratio_Fnu;    ///< F_nu / F_1, norm <= 1 (Jensen)
    Eigen::MatrixXd ratio_Fnunu;  ///< F_{nu nu^T} / F_1, symmetric
};

/// Atom sums are exact; arc contributions use adaptive quadrature with
/// relative tolerance 1e-12 after shifting by the arc's closest angle.
MomentBundle moments(const SphereMeasure& mu, const Params& params,
                     const Eigen::VectorXd& x);

/**
 * Exponentially transformed solution
 *
 *     phi(x) = -(2 / (c0 sin(alpha))) * log F_1(x),
 *
 * a smooth, concave, cot(alpha)-Lipschitz sub-solution of the travelling
 * graph equation for every admissible measure.
 */
double eval_phi_star(const SphereMeasure& mu, const Params& params,
                     const Eigen::VectorXd& x);

Eigen::VectorXd grad_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x);

Eigen::MatrixXd hess_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x);

/// Value, gradient and Hessian from a single moment evaluation.
struct PhiStarSample {
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

PhiStarSample sample_phi_star(const SphereMeasure& mu, const Params& params,
                              const Eigen::VectorXd& x);

/// Residual of the viscous eikonal equation
///     -laplacian(phi) = (c0 sin(alpha) / 2) (cot(alpha)^2 - |D(phi)|^2),
/// which phi_star satisfies identically; the returned value is the
/// left-hand side minus the right-hand side.
double viscous_eikonal_residual(const SphereMeasure& mu, const Params& params,
                                const Eigen::VectorXd& x);

/**
 * Quasilinear travelling graph operator
 *
 *     N[phi] = -tr(H)/s + H(g,g)/s^3 + c0 - c/s,   s = sqrt(1 + |g|^2),
 *
 * applied to supplied first and second derivatives.  Solutions satisfy
 * N[phi] = 0; sub-solutions N[phi] <= 0.
 */
double mcm_operator(const Params& params, const Eigen::VectorXd& grad,
                    const Eigen::MatrixXd& hess);

/// Twice differentiable scalar field presented through its derivatives.
struct C2Sample {
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};
using C2Field = std::function<C2Sample(const Eigen::VectorXd&)>;

double mcm_operator(const C2Field& field, const Params& params,
                    const Eigen::VectorXd& x);

}  // namespace fmcm
