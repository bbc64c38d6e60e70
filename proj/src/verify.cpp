#include "fmcm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fmcm/cone.hpp"
#include "fmcm/eikonal.hpp"
#include "fmcm/errors.hpp"
#include "fmcm/laplace.hpp"
#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"
#include "fmcm/rng.hpp"
#include "fmcm/solver.hpp"
#include "fmcm/subsolution.hpp"

namespace fmcm {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    return std::string(buf);
}

std::vector<double> log_nodes(double lo, double hi, int n) {
    std::vector<double> r(n);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        r[i] = std::exp(la + (lb - la) * i / double(n - 1));
    return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double lambda_max_2x2(const Eigen::MatrixXd& h) {
    const double a = h(0, 0), d = h(1, 1), b = h(0, 1);
    const double mid = 0.5 * (a + d);
    return mid + std::sqrt(0.25 * (a - d) * (a - d) + b * b);
}

struct SolvedCase {
    int k = 0;
    bool converged = false;
    std::string failure;
    GridField field;
    SandwichCheck check;
    double gap_bound = 0.0;
    double solve_seconds = 0.0;
    int iterations = 0;
    double final_residual = 0.0;
    Params params;
    PlaneSpec spec;
    SphereMeasure mu;
};

std::vector<double> plane_angles(int k) {
    if (k == 2) return {0.0, M_PI};
    return {M_PI / 2, 7 * M_PI / 6, 11 * M_PI / 6};
}

SolvedCase solve_case(int k, const Params& params, const Rect& domain, double h) {
    SolvedCase sc;
    sc.k = k;
    sc.params = params;
    const std::vector<double> thetas = plane_angles(k);
    sc.spec = make_plane_spec_angles(params, thetas,
                                     std::vector<double>(thetas.size(), 0.0));
    for (double t : thetas) sc.mu.add_atom_at_angle(t, 1.0);
    validate(sc.mu);
    sc.gap_bound = -2.0 * std::log(double(k)) /
                   (params.c0 * std::sin(params.alpha));

    const auto boundary = [&sc](const Eigen::Vector2d& x) {
        return eval_inf_planes(sc.spec, x).value;
    };
    const auto initial = [&sc](const Eigen::Vector2d& x) {
        return eval_phi_star(sc.mu, sc.params, x);
    };

    NewtonOptions opts;
    opts.max_iters = 50;
    opts.residual_tol = 1e-10;
    const double t0 = now_seconds();
    try {
        SolveResult res = solve_dirichlet(domain, h, boundary, initial, params, opts);
        sc.solve_seconds = now_seconds() - t0;
        sc.iterations = res.iterations;
        sc.final_residual = res.residual_history.back();
        sc.field = std::move(res.field);
        sc.converged = true;
    } catch (const Error& e) {
        sc.solve_seconds = now_seconds() - t0;
        sc.failure = e.what();
        return sc;
    }

    const double tol = 10.0 * h * h;
    try {
        sc.check = verify_sandwich(sc.field, sc.mu, sc.spec, tol);
    } catch (const Error& e) {
        sc.converged = false;
        sc.failure = e.what();
    }
    return sc;
}

}  // namespace

std::vector<CheckResult> run_subsolution_suite(const VerifyConfig& cfg) {
    Rng rng(cfg.seed);
    const double t0 = now_seconds();

    double max_grad_excess = -HUGE_VAL;
    double max_eig = -HUGE_VAL;
    double max_abs_eik = 0.0;
    double max_op = -HUGE_VAL;
    long samples = 0;

    for (int m = 0; m < cfg.n_measures; ++m) {
        const double alpha = rng.uniform(0.3, M_PI / 2);
        const double c0 = rng.uniform(0.5, 2.0);
        const Params params = make_params(alpha, c0, 3);

        SphereMeasure mu;
        const int n_atoms = rng.uniform_int(1, 8);
        const int n_arcs = rng.uniform_int(0, 2);
        for (int a = 0; a < n_atoms; ++a) {
            const double theta = rng.uniform(0.0, 2 * M_PI);
            const double mass = rng.uniform(0.2, 5.0);
            mu.add_atom_at_angle(theta, mass);
        }
        for (int a = 0; a < n_arcs; ++a) {
            const double lo = rng.uniform(0.0, 2 * M_PI);
            const double len = rng.uniform(0.1, 2.0);
            mu.arcs.push_back({lo, lo + len});
        }
        validate(mu);

        for (int p = 0; p < cfg.n_points; ++p) {
            const Eigen::Vector2d x = rng.in_disk(50.0);
            const PhiStarSample s = sample_phi_star(mu, params, x);
            ++samples;

            max_grad_excess =
                std::max(max_grad_excess, s.grad.norm() - params.cot_alpha);
            max_eig = std::max(max_eig, lambda_max_2x2(s.hess));
            const double rhs = 0.5 * c0 * std::sin(alpha) *
                               (params.cot_alpha * params.cot_alpha -
                                s.grad.squaredNorm());
            max_abs_eik = std::max(max_abs_eik, std::abs(-s.hess.trace() - rhs));
            max_op = std::max(max_op, mcm_operator(params, s.grad, s.hess));
        }
    }
    const double dt = now_seconds() - t0;

    std::vector<CheckResult> out;
    out.push_back({"gradient-bound", max_grad_excess <= 1e-12 && dt < 10.0,
                   1e-12 - max_grad_excess,
                   strf("max |grad phi*| - cot(alpha) = %.3e over %ld samples",
                        max_grad_excess, samples),
                   dt});
    out.push_back({"concavity", max_eig <= 1e-12 && dt < 10.0, 1e-12 - max_eig,
                   strf("max Hessian eigenvalue = %.3e over %ld samples",
                        max_eig, samples),
                   dt});
    out.push_back({"viscous-eikonal-identity",
                   max_abs_eik <= 1e-8 && dt < 10.0, 1e-8 - max_abs_eik,
                   strf("max |residual| = %.3e over %ld samples", max_abs_eik,
                        samples),
                   dt});
    out.push_back({"subsolution-sign", max_op <= 1e-10 && dt < 10.0,
                   1e-10 - max_op,
                   strf("max graph operator = %.3e over %ld samples", max_op,
                        samples),
                   dt});
    return out;
}

std::vector<CheckResult> run_cone_suite(const VerifyConfig&) {
    std::vector<CheckResult> out;
    const double c0 = 1.0;
    const std::vector<double> alphas = {M_PI / 6, M_PI / 4, M_PI / 3};

    double t0 = now_seconds();
    std::vector<ConeProfile> profiles;
    for (double alpha : alphas)
        profiles.push_back(solve_cone(make_params(alpha, c0, 3), 1100.0, 1e-12));

    double worst_margin = HUGE_VAL;
    double worst_ln = 0.0, worst_inv = 0.0;
    const std::vector<double> nodes = log_nodes(100.0, 1000.0, 64);
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        const Params params = profiles[ai].params;
        Eigen::MatrixXd A(nodes.size(), 5);
        Eigen::VectorXd y(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double r = nodes[i];
            A(i, 0) = r;
            A(i, 1) = std::log(r);
            A(i, 2) = 1.0;
            A(i, 3) = 1.0 / r;
            A(i, 4) = 1.0 / (r * r);
            y(i) = eval_phi_baseline(profiles[ai], r);
        }
        const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
        const double sa = std::sin(params.alpha);
        const double ln_exact = 1.0 / (c0 * sa);
        const double inv_exact =
            (2.0 - 3.0 * sa * sa) / (c0 * c0 * std::sin(2.0 * params.alpha));
        const double rel_ln = std::abs(coef(1) - ln_exact) / std::abs(ln_exact);
        const double rel_inv =
            std::abs(coef(3) - inv_exact) / std::abs(inv_exact);
        const double margin = std::min(0.01 - rel_ln, 0.05 - rel_inv);
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_ln = rel_ln;
            worst_inv = rel_inv;
        }
    }
    double dt = now_seconds() - t0;
    out.push_back({"cone-expansion-coefficients",
                   worst_margin >= 0.0 && dt < 30.0, worst_margin,
                   strf("worst rel err: ln r coef %.2e (tol 1e-2), 1/r coef "
                        "%.2e (tol 5e-2)",
                        worst_ln, worst_inv),
                   dt});

    t0 = now_seconds();
    {
        ConeProfile& prof = profiles[1];
        const Params params = prof.params;
        const double sa = std::sin(params.alpha);
        const double c_raw = cone_constant(prof);
        const double c_ref = cone_reference_constant(params);

        SphereMeasure mu;
        mu.arcs.push_back({0.0, 2 * M_PI});
        validate(mu);
        const double norm_shift = 2.0 / (c0 * sa) * std::log(2 * M_PI);

        const auto phi_matched = [&](double r) {
            return eval_phi_baseline(prof, r) - c_raw + c_ref;
        };
        const auto phi_star_sym = [&](double r) {
            return eval_phi_star(mu, params, Eigen::Vector2d(r, 0.0)) +
                   norm_shift;
        };

        const std::vector<double> rs = log_nodes(100.0, 400.0, 33);
        std::vector<double> lx(rs.size()), ly(rs.size());
        for (size_t i = 0; i < rs.size(); ++i) {
            lx[i] = std::log(rs[i]);
            ly[i] = std::log(std::abs(phi_matched(rs[i]) - phi_star_sym(rs[i])));
        }
        const double slope = fit_slope(lx, ly);

        double min_gap = HUGE_VAL;
        for (double r : log_nodes(0.01, 400.0, 48))
            min_gap = std::min(min_gap, phi_matched(r) - phi_star_sym(r));

        const double dt6 = now_seconds() - t0;
        const double margin =
            std::min(0.1 - std::abs(slope + 0.5), min_gap);
        out.push_back(
            {"cone-subsolution-matching",
             std::abs(slope + 0.5) <= 0.1 && min_gap >= 0.0 && dt6 < 30.0,
             margin,
             strf("log-log slope of |phi_c - phi*| = %.4f (want -0.5 +- 0.1); "
                  "min(phi_c - phi*) = %.3e",
                  slope, min_gap),
             dt6});
    }

    t0 = now_seconds();
    {
        ConeProfile& prof = profiles[1];
        const Params params = prof.params;
        const double c_raw = cone_constant(prof);
        const std::vector<double> rs = {50.0, 100.0, 200.0};
        std::vector<double> ks;
        for (double r : rs) {
            const double model = 1.0 -
                                 std::log(r) / (c0 * std::cos(params.alpha) * r) +
                                 (0.0 - c_raw) / (r * params.cot_alpha);
            const double tb = theta_bar(prof, r, 0.0);
            ks.push_back(r * r * std::abs(std::cos(tb) - model));
        }
        const double mean = (ks[0] + ks[1] + ks[2]) / 3.0;
        double spread = 0.0;
        for (double k : ks) spread = std::max(spread, std::abs(k - mean) / mean);
        const double dt10 = now_seconds() - t0;
        out.push_back({"aperture-asymptotics", spread <= 0.2 && dt10 < 10.0,
                       0.2 - spread,
                       strf("K(r) = r^2 |cos(theta_bar) - model| = %.4f / %.4f "
                            "/ %.4f at r = 50/100/200 (spread %.1f%%)",
                            ks[0], ks[1], ks[2], 100.0 * spread),
                       dt10});
    }
    return out;
}

std::vector<CheckResult> run_laplace_suite(const VerifyConfig& cfg) {
    const double t0 = now_seconds();
    const Params& params = cfg.params;
    const SectorIntegral si =
        make_sector_integral(params, 0.0, M_PI / 2, 1.0, 1.0);

    std::vector<double> radii = cfg.r_list;
    if (radii.empty()) radii = {25.0, 50.0, 100.0, 200.0, 400.0};

    std::vector<double> maxima;
    for (double r : radii) {
        double m = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double theta_x = si.theta1 +
                                   (si.theta2 - si.theta1) * i / 63.0;
            m = std::max(m, f_asymptotic(si, r, theta_x).r_term_bound_check);
        }
        maxima.push_back(m);
    }

    double worst_ratio = 0.0;
    for (size_t i = 0; i + 1 < maxima.size(); ++i)
        worst_ratio = std::max(worst_ratio, maxima[i + 1] / maxima[i]);

    std::string table;
    for (size_t i = 0; i < radii.size(); ++i)
        table += strf("%s%g:%.3f", i ? " " : "", radii[i], maxima[i]);

    const double dt = now_seconds() - t0;
    std::vector<CheckResult> out;
    out.push_back({"laplace-remainder", worst_ratio <= 1.5 && dt < 60.0,
                   1.5 - worst_ratio,
                   strf("scaled remainder max over 64 angles [%s], worst "
                        "consecutive ratio %.3f",
                        table.c_str(), worst_ratio),
                   dt});
    return out;
}

std::vector<CheckResult> run_sandwich_suite(const VerifyConfig& cfg) {
    const Params& params = cfg.params;
    const Rect domain{-20.0, 20.0, -20.0, 20.0};
    const double h = 0.1;
    const double tol = 10.0 * h * h;

    std::vector<int> ks;
    if (cfg.k == 0 || cfg.k == 2) ks.push_back(2);
    if (cfg.k == 0 || cfg.k == 3) ks.push_back(3);

    std::vector<SolvedCase> cases;
    for (int k : ks) cases.push_back(solve_case(k, params, domain, h));

    double sandwich_margin = HUGE_VAL;
    double solve_seconds = 0.0;
    bool sandwich_pass = true;
    std::string detail;
    for (const SolvedCase& sc : cases) {
        solve_seconds += sc.solve_seconds;
        if (!sc.converged) {
            sandwich_pass = false;
            sandwich_margin = -HUGE_VAL;
            detail += strf("%sk=%d: %s", detail.empty() ? "" : "; ", sc.k,
                           sc.failure.c_str());
            continue;
        }
        const double m = std::min({sc.check.min_lower_margin + tol,
                                   tol - sc.check.max_upper_margin,
                                   sc.check.min_upper_margin -
                                       (sc.gap_bound - tol)});
        sandwich_margin = std::min(sandwich_margin, m);
        detail += strf(
            "%sk=%d: %d iters, res %.2e, phi-phi* >= %.2e, phi-env <= %.2e, "
            "min(phi-env) %.4f vs bound %.4f - %.2g",
            detail.empty() ? "" : "; ", sc.k, sc.iterations, sc.final_residual,
            sc.check.min_lower_margin, sc.check.max_upper_margin,
            sc.check.min_upper_margin, sc.gap_bound, tol);
    }
    sandwich_pass = sandwich_pass && sandwich_margin >= 0.0 &&
                    solve_seconds < 120.0;

    std::vector<CheckResult> out;
    out.push_back({"sandwich", sandwich_pass, sandwich_margin, detail,
                   solve_seconds});

    double decay_margin = HUGE_VAL;
    bool decay_pass = true;
    std::string decay_detail;
    double decay_seconds = 0.0;
    for (const SolvedCase& sc : cases) {
        if (!sc.converged) {
            decay_pass = false;
            decay_margin = -HUGE_VAL;
            continue;
        }
        std::string row;
        for (size_t i = 0; i < sc.check.decay.size(); ++i) {
            const SandwichDecayRow& d = sc.check.decay[i];
            row += strf("%s%g:%.2e", i ? " " : "", d.min_edge_distance,
                        d.max_abs_gap);
            if (i > 0)
                decay_margin =
                    std::min(decay_margin, sc.check.decay[i - 1].max_abs_gap -
                                               d.max_abs_gap);
        }
        decay_detail += strf("%sk=%d [%s]", decay_detail.empty() ? "" : "; ",
                             sc.k, row.c_str());
    }
    decay_pass = decay_pass && decay_margin >= 0.0;
    out.push_back({"edge-distance-decay", decay_pass, decay_margin,
                   decay_detail.empty() ? "no converged fields" : decay_detail,
                   decay_seconds});

    const SolvedCase* base = nullptr;
    for (const SolvedCase& sc : cases)
        if (sc.converged && (!base || sc.k > base->k)) base = &sc;
    if (!base) {
        out.push_back({"uniqueness-probe", false, -HUGE_VAL,
                       "no converged field to compare against", 0.0});
        return out;
    }

    const double t0 = now_seconds();
    const SolvedCase& b = *base;
    const auto boundary = [&b](const Eigen::Vector2d& x) {
        return eval_inf_planes(b.spec, x).value;
    };
    const auto initial_mid = [&b](const Eigen::Vector2d& x) {
        return 0.5 * (eval_phi_star(b.mu, b.params, x) +
                      eval_inf_planes(b.spec, x).value);
    };
    NewtonOptions opts;
    opts.max_iters = 50;
    opts.residual_tol = 1e-10;
    bool uniq_pass = false;
    double uniq_margin = -HUGE_VAL;
    std::string uniq_detail;
    try {
        const SolveResult other =
            solve_dirichlet(domain, h, boundary, initial_mid, params, opts);
        double maxdiff = 0.0;
        for (size_t i = 0; i < b.field.values.size(); ++i)
            maxdiff = std::max(maxdiff, std::abs(b.field.values[i] -
                                                 other.field.values[i]));
        const double dt = now_seconds() - t0;
        uniq_pass = maxdiff <= 1e-9 && dt < 120.0;
        uniq_margin = 1e-9 - maxdiff;
        uniq_detail = strf(
            "k=%d fields from subsolution and midpoint guesses differ by "
            "%.2e in max norm (%d vs %d iters)",
            b.k, maxdiff, b.iterations, other.iterations);
    } catch (const Error& e) {
        uniq_detail = strf("k=%d midpoint-guess solve failed: %s", b.k, e.what());
    }
    out.push_back({"uniqueness-probe", uniq_pass, uniq_margin, uniq_detail,
                   now_seconds() - t0});
    return out;
}

std::vector<CheckResult> run_all_suites(const VerifyConfig& cfg) {
    const std::vector<CheckResult> sub = run_subsolution_suite(cfg);
    const std::vector<CheckResult> cone = run_cone_suite(cfg);
    const std::vector<CheckResult> lap = run_laplace_suite(cfg);
    const std::vector<CheckResult> sand = run_sandwich_suite(cfg);

    std::vector<CheckResult> out;
    out.insert(out.end(), sub.begin(), sub.end());
    out.push_back(cone[0]);
    out.push_back(cone[1]);
    out.push_back(lap[0]);
    out.push_back(sand[0]);
    out.push_back(sand[1]);
    out.push_back(cone[2]);
    out.push_back(sand[2]);
    return out;
}

void print_check_results(std::ostream& os,
                         const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        os << strf("[%s] %-26s margin=%+.3e  %s  (%.2f s)\n",
                   r.pass ? "PASS" : "FAIL", r.name.c_str(), r.margin,
                   r.detail.c_str(), r.seconds);
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

}  // namespace fmcm
