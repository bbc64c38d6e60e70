#include "fmcm/measure.hpp"

#include <cmath>

namespace fmcm {

SphereMeasure SphereMeasure::regularized(double eps) const {
    if (eps < 0.0) throw DomainError("regularized: eps must be nonnegative");
    SphereMeasure out = *this;
    if (eps == 0.0) return out;
    const int d = dim - 1;
    for (int j = 0; j < d; ++j) {
        for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd nu = Eigen::VectorXd::Zero(d);
            nu(j) = sign;
            bool merged = false;
            for (auto& a : out.atoms) {
                if ((a.nu - nu).norm() < 1e-12) {
                    a.mass += eps;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.atoms.push_back({nu, eps});
        }
    }
    return out;
}

void validate(const SphereMeasure& mu) {
    if (mu.dim < 2) throw DomainError("SphereMeasure: dimension must be at least 2");
    for (const auto& a : mu.atoms) {
        if (a.nu.size() != mu.dim - 1)
            throw DomainError("SphereMeasure: atom direction has wrong dimension");
        if (std::fabs(a.nu.norm() - 1.0) > 1e-12)
            throw DomainError("SphereMeasure: atom direction is not unit");
        if (!(a.mass > 0.0) || !std::isfinite(a.mass))
            throw DomainError("SphereMeasure: atom mass must be positive and finite");
    }
    if (!mu.arcs.empty() && mu.dim != 3)
        throw DomainError("SphereMeasure: arcs are only supported on S^1 (N = 3)");
    for (const auto& arc : mu.arcs) {
        if (!(arc.theta_lo < arc.theta_hi))
            throw DomainError("SphereMeasure: arc must have theta_lo < theta_hi");
        if (arc.theta_hi - arc.theta_lo > 2 * std::numbers::pi + 1e-15)
            throw DomainError("SphereMeasure: arc longer than the full circle");
    }
    const double m = mu.total_mass();
    if (!(m > 0.0) || !std::isfinite(m))
        throw DomainError("SphereMeasure: total mass must be positive and finite");
}

}  // namespace fmcm
