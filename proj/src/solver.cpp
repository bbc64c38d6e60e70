#include "fmcm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fmcm/errors.hpp"
#include "fmcm/subsolution.hpp"

namespace fmcm {

namespace {

void validate(const NewtonOptions& opts) {
    if (opts.max_iters < 1) throw DomainError("max_iters must be positive");
    if (!(opts.residual_tol >= 1e-12)) {
        throw DomainError("residual_tol must be at least 1e-12");
    }
    if (!(opts.damping > 0.0) || !(opts.damping <= 1.0)) {
        throw DomainError("damping must lie in (0, 1]");
    }
    if (opts.coarse_levels < 0) {
        throw DomainError("coarse_levels must be nonnegative");
    }
}

double interior_max_norm(const GridField& field, const std::vector<double>& r) {
    double m = 0.0;
    for (int j = 1; j < field.ny - 1; ++j) {
        for (int i = 1; i < field.nx - 1; ++i) {
            m = std::max(m, std::abs(r[static_cast<std::size_t>(j) * field.nx + i]));
        }
    }
    return m;
}

double interior_l2_norm(const GridField& field, const std::vector<double>& r) {
    double s = 0.0;
    for (int j = 1; j < field.ny - 1; ++j) {
        for (int i = 1; i < field.nx - 1; ++i) {
            const double v = r[static_cast<std::size_t>(j) * field.nx + i];
            s += v * v;
        }
    }
    return std::sqrt(s);
}

/// Bilinear factor-2 prolongation; fine must have 2*(coarse.n-1)+1 nodes
/// per direction on the same rectangle.
void prolongate(const GridField& coarse, GridField& fine) {
    for (int j = 0; j < fine.ny; ++j) {
        for (int i = 0; i < fine.nx; ++i) {
            const int ci = i / 2, cj = j / 2;
            if (i % 2 == 0 && j % 2 == 0) {
                fine.at(i, j) = coarse.at(ci, cj);
            } else if (j % 2 == 0) {
                fine.at(i, j) = 0.5 * (coarse.at(ci, cj) + coarse.at(ci + 1, cj));
            } else if (i % 2 == 0) {
                fine.at(i, j) = 0.5 * (coarse.at(ci, cj) + coarse.at(ci, cj + 1));
            } else {
                fine.at(i, j) = 0.25 * (coarse.at(ci, cj) + coarse.at(ci + 1, cj) +
                                        coarse.at(ci, cj + 1) + coarse.at(ci + 1, cj + 1));
            }
        }
    }
}

/// Newton iteration on one grid, globalized by pseudo-transient
/// continuation: each step solves (I/tau + J) delta = -F, an implicit Euler
/// step of the parabolic relaxation phi_t = -F(phi), which converges to the
/// discrete solution by comparison.  tau follows switched evolution
/// relaxation, so 1/tau vanishes as the residual drops and the tail is
/// plain Newton with quadratic convergence.  Steps are accepted under a
/// bounded-growth guard rather than strict descent: the residual norm need
/// not decrease monotonically along the flow.
int newton_level(GridField& phi, const Params& params, const NewtonOptions& opts,
                 std::vector<double>& history) {
    const int n = interior_count(phi);
    std::vector<double> res;
    assemble_residual(phi, params, opts.exec, res);
    double norm = interior_max_norm(phi, res);
    double l2 = interior_l2_norm(phi, res);
    history.push_back(norm);
    if (norm <= opts.residual_tol) return 0;

    Eigen::SparseMatrix<double> jac(n, n);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs(n), delta(n);
    GridField trial = phi;
    bool analyzed = false;
    double tau = 0.1;
    constexpr double kTauMax = 1e14;
    constexpr double kGrowthCap = 4.0;
    int iterations = 0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        assemble_jacobian(phi, params, opts.exec, triplets);
        const std::size_t base_size = triplets.size();

        bool accepted = false;
        double trial_l2 = 0.0;
        for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
            triplets.resize(base_size);
            if (tau < kTauMax) {
                const double shift = 1.0 / tau;
                for (int row = 0; row < n; ++row) {
                    triplets.emplace_back(row, row, shift);
                }
            }
            jac.setZero();
            jac.setFromTriplets(triplets.begin(), triplets.end());
            if (!analyzed) {
                lu.analyzePattern(jac);
                analyzed = true;
            }
            lu.factorize(jac);
            if (lu.info() != Eigen::Success) {
                if (tau > 1e-12) {
                    tau *= 0.25;
                    continue;
                }
                throw LinearSolveFailure("sparse LU factorization failed at iteration " +
                                         std::to_string(iter));
            }
            for (int j = 1; j < phi.ny - 1; ++j) {
                for (int i = 1; i < phi.nx - 1; ++i) {
                    rhs[interior_index(phi, i, j)] =
                        -res[static_cast<std::size_t>(j) * phi.nx + i];
                }
            }
            delta = lu.solve(rhs);
            if (lu.info() != Eigen::Success) {
                throw LinearSolveFailure("sparse LU back-substitution failed");
            }
            for (int j = 1; j < phi.ny - 1; ++j) {
                for (int i = 1; i < phi.nx - 1; ++i) {
                    trial.at(i, j) = phi.at(i, j) +
                                     opts.damping * delta[interior_index(phi, i, j)];
                }
            }
            std::vector<double> trial_res;
            assemble_residual(trial, params, opts.exec, trial_res);
            trial_l2 = interior_l2_norm(trial, trial_res);
            if (opts.trace) {
                std::fprintf(stderr,
                             "h=%.4g iter %d attempt %d: tau=%.2e |res|_inf=%.3e "
                             "|res|_2=%.3e |delta|_inf=%.3e -> |res|_2=%.3e\n",
                             phi.h, iter, attempt, tau, norm, l2,
                             delta.lpNorm<Eigen::Infinity>(), trial_l2);
            }
            if (std::isfinite(trial_l2) && trial_l2 <= kGrowthCap * l2) {
                phi.values = trial.values;
                res = std::move(trial_res);
                norm = interior_max_norm(phi, res);
                accepted = true;
                break;
            }
            if (tau <= 1e-12) break;
            tau *= 0.25;
        }
        iterations = iter + 1;
        if (!accepted) {
            throw NonConvergence("pseudo-timestep underflow at residual " +
                                 std::to_string(norm));
        }
        // switched evolution relaxation, growth capped per step
        tau = std::min(tau * std::min(std::max(l2 / std::max(trial_l2, 1e-300), 0.25), 1e4),
                       kTauMax);
        l2 = trial_l2;
        history.push_back(norm);
        if (norm <= opts.residual_tol) return iterations;
    }
    throw NonConvergence("Newton did not reach residual_tol within max_iters; last residual " +
                         std::to_string(norm));
}

}  // namespace

std::vector<double> residual_field(const GridField& field, const Params& params) {
    std::vector<double> out;
    assemble_residual(field, params, Exec::Serial, out);
    return out;
}

SolveResult solve_dirichlet(const Rect& domain, double h,
                            const std::function<double(const Eigen::Vector2d&)>& boundary_fn,
                            const std::function<double(const Eigen::Vector2d&)>& initial_fn,
                            const Params& params, const NewtonOptions& opts) {
    validate(opts);
    if (params.dim != 3) {
        throw DomainError("grid solver requires ambient dimension 3");
    }

    SolveResult result;
    result.field = make_grid(domain.a1, domain.b1, domain.a2, domain.b2, h);
    GridField& phi = result.field;

    // Grid sequencing: the initial guess for each level is the interpolated
    // solution of the next coarser one, so the target level starts inside
    // the Newton basin.  Levels are clamped to what the cell counts divide.
    int levels = std::max(opts.coarse_levels, 0);
    while (levels > 0 &&
           ((phi.nx - 1) % (1 << levels) != 0 || (phi.ny - 1) % (1 << levels) != 0 ||
            (phi.nx - 1) / (1 << levels) < 4 || (phi.ny - 1) / (1 << levels) < 4)) {
        --levels;
    }

    GridField prev;
    bool have_prev = false;
    for (int l = levels; l >= 1; --l) {
        GridField coarse = make_grid(domain.a1, domain.b1, domain.a2, domain.b2,
                                     h * double(1 << l));
        if (have_prev) {
            prolongate(prev, coarse);
        } else {
            sample_field(coarse, initial_fn, opts.exec);
        }
        fill_boundary(coarse, boundary_fn);
        std::vector<double> history;
        result.coarse_iterations += newton_level(coarse, params, opts, history);
        prev = std::move(coarse);
        have_prev = true;
    }

    if (have_prev) {
        prolongate(prev, phi);
    } else {
        sample_field(phi, initial_fn, opts.exec);
    }
    fill_boundary(phi, boundary_fn);
    result.iterations = newton_level(phi, params, opts, result.residual_history);
    return result;
}

SandwichCheck verify_sandwich(const GridField& field, const SphereMeasure& mu,
                              const PlaneSpec& spec, double tol,
                              const std::vector<double>& decay_thresholds) {
    if (field.nx < 3 || field.ny < 3) throw DomainError("grid has no interior nodes");
    if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
    const Params& params = spec.params;

    SandwichCheck report;
    report.min_lower_margin = std::numeric_limits<double>::infinity();
    report.max_upper_margin = -std::numeric_limits<double>::infinity();
    report.min_upper_margin = std::numeric_limits<double>::infinity();
    report.argmin_lower.setZero();
    report.argmax_upper.setZero();
    report.decay.reserve(decay_thresholds.size());
    for (double l : decay_thresholds) {
        report.decay.push_back({l, 0.0, 0});
    }

    for (int j = 1; j < field.ny - 1; ++j) {
        for (int i = 1; i < field.nx - 1; ++i) {
            const Eigen::Vector2d x = field.point(i, j);
            const double v = field.at(i, j);
            const double lower = eval_phi_star(mu, params, x);
            const double upper = eval_inf_planes(spec, x).value;
            const double lower_margin = v - lower;
            const double upper_margin = v - upper;
            if (lower_margin < report.min_lower_margin) {
                report.min_lower_margin = lower_margin;
                report.argmin_lower = x;
            }
            if (upper_margin > report.max_upper_margin) {
                report.max_upper_margin = upper_margin;
                report.argmax_upper = x;
            }
            report.min_upper_margin = std::min(report.min_upper_margin, upper_margin);
            if (lower_margin < -tol || upper_margin > tol) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "node (%.6g, %.6g): value %.12g outside [%.12g, %.12g] at tol %g",
                              x[0], x[1], v, lower, upper, tol);
                throw SandwichViolation(msg);
            }
            const double dist = edge_distance(spec, x);
            const double gap = std::abs(upper_margin);
            for (auto& row : report.decay) {
                if (dist >= row.min_edge_distance) {
                    row.max_abs_gap = std::max(row.max_abs_gap, gap);
                    ++row.nodes;
                }
            }
        }
    }
    return report;
}

double concavity_probe(const GridField& field) {
    if (field.nx < 7 || field.ny < 7) {
        throw DomainError("concavity probe needs an interior of at least 5x5 nodes");
    }
    const double h2 = field.h * field.h;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < field.ny - 1; ++j) {
        for (int i = 1; i < field.nx - 1; ++i) {
            const double C = field.at(i, j);
            const double M11 = (field.at(i + 1, j) - 2.0 * C + field.at(i - 1, j)) / h2;
            const double M22 = (field.at(i, j + 1) - 2.0 * C + field.at(i, j - 1)) / h2;
            const double M12 = (field.at(i + 1, j + 1) + field.at(i - 1, j - 1) -
                                field.at(i - 1, j + 1) - field.at(i + 1, j - 1)) /
                               (4.0 * h2);
            const double mean = 0.5 * (M11 + M22);
            const double off = std::sqrt(0.25 * (M11 - M22) * (M11 - M22) + M12 * M12);
            worst = std::max(worst, mean + off);
        }
    }
    return worst;
}

}  // namespace fmcm
