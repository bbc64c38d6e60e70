#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "fmcm/cone.hpp"
#include "fmcm/config.hpp"
#include "fmcm/eikonal.hpp"
#include "fmcm/errors.hpp"
#include "fmcm/grid.hpp"
#include "fmcm/kernels.hpp"
#include "fmcm/solver.hpp"
#include "fmcm/subsolution.hpp"
#include "fmcm/supersolution.hpp"
#include "fmcm/verify.hpp"

namespace {

using namespace fmcm;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string strf(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return std::string(buf);
}

RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return RunConfig();
    return load_config(path);
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    return os;
}

void write_point_rows(std::ostream& os, const std::vector<Eigen::Vector2d>& pts,
                      const std::function<double(const Eigen::Vector2d&)>& fn) {
    os << "x1,x2,value\n";
    char buf[128];
    for (const auto& p : pts) {
        const double v = fn(p);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x(), p.y(), v);
        os << buf;
    }
}

/// Evaluates fn on the configured sample set (grid or point list) and
/// writes it to out; grids may also be stored in the binary format.
void emit_field(const RunConfig& cfg, const std::string& out,
                const std::function<double(const Eigen::Vector2d&)>& fn) {
    const EvalConfig& e = cfg.eval;
    if (e.has_grid && !e.points.empty()) {
        throw ConfigError("[eval]: give either a grid or points, not both");
    }
    if (e.has_grid) {
        GridField field = make_grid(e.a1, e.b1, e.a2, e.b2, e.h);
        sample_field(field, fn, Exec::Parallel);
        if (e.format == "csv") {
            save_grid_csv(out, field);
        } else if (e.format == "bin") {
            save_grid_binary(out, field);
        } else {
            throw ConfigError("[eval]: format must be csv or bin");
        }
        return;
    }
    if (e.points.empty()) {
        throw ConfigError("[eval]: needs a grid or at least one point");
    }
    if (e.format != "csv") {
        throw ConfigError("[eval]: point lists support only csv output");
    }
    auto os = open_csv(out);
    write_point_rows(os, e.points, fn);
}

double sample_extent(const RunConfig& cfg) {
    const EvalConfig& e = cfg.eval;
    double r = 0.0;
    if (e.has_grid) {
        r = std::max(std::hypot(e.a1, e.a2), std::hypot(e.b1, e.b2));
        r = std::max(r, std::hypot(e.a1, e.b2));
        r = std::max(r, std::hypot(e.b1, e.a2));
    }
    for (const auto& p : e.points) r = std::max(r, p.norm());
    return r;
}

int cmd_eval(const RunConfig& cfg, const std::string& what,
             const std::string& out) {
    const Params& params = cfg.params;
    if (what == "eikonal") {
        const PlaneSpec spec = planes_spec(cfg);
        emit_field(cfg, out, [&](const Eigen::Vector2d& x) {
            return eval_inf_planes(spec, x).value;
        });
    } else if (what == "sub") {
        SphereMeasure mu;
        if (cfg.has_measure) {
            mu = cfg.measure;
        } else if (cfg.has_planes) {
            mu = planes_measure(cfg);
        } else {
            throw ConfigError("sub eval needs a [measure] or [planes] block");
        }
        validate(mu);
        emit_field(cfg, out, [&](const Eigen::Vector2d& x) {
            return eval_phi_star(mu, params, x);
        });
    } else if (what == "super") {
        if (!cfg.has_profile) {
            throw ConfigError("super eval needs a [profile] block");
        }
        const double need = sample_extent(cfg) + 10.0;
        if (cfg.eval.r_max < need) {
            throw ConfigError(
                strf("[eval]: r_max %g too small for the sample set; need at "
                     "least %g", cfg.eval.r_max, need));
        }
        const ProfileN3 profile =
            make_profile(params, cfg.profile_thetas, cfg.profile_sigmas);
        auto cone = std::make_shared<const ConeProfile>(
            solve_cone(params, cfg.eval.r_max, 1e-12));
        const GlobalSuperN3 gs =
            assemble_global_N3(cone, profile, cfg.lambda0, params);
        emit_field(cfg, out, [&](const Eigen::Vector2d& x) {
            return eval_global(gs, x);
        });
    } else if (what == "arc") {
        if (!cfg.arc.present) throw ConfigError("arc eval needs an [arc] block");
        const double need = sample_extent(cfg) + 10.0;
        if (cfg.eval.r_max < need) {
            throw ConfigError(
                strf("[eval]: r_max %g too small for the sample set; need at "
                     "least %g", cfg.eval.r_max, need));
        }
        auto cone = std::make_shared<const ConeProfile>(
            solve_cone(params, cfg.eval.r_max, 1e-12));
        const ArcPiece piece = make_arc_piece(params, cfg.arc.theta1,
                                              cfg.arc.theta2, cfg.arc.lambda,
                                              cone);
        emit_field(cfg, out, [&](const Eigen::Vector2d& x) {
            return eval_arc(piece, x);
        });
    } else if (what == "cone") {
        if (cfg.eval.radii.empty()) {
            throw ConfigError("cone eval needs at least one r = ... sample");
        }
        double r_max = cfg.eval.r_max;
        for (double r : cfg.eval.radii) r_max = std::max(r_max, r + 1.0);
        ConeProfile prof = solve_cone(params, r_max, 1e-12);
        auto os = open_csv(out);
        os << "r,v,phi\n";
        char buf[128];
        for (double r : cfg.eval.radii) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r,
                          eval_v(prof, r), eval_phi_baseline(prof, r));
            os << buf;
        }
    } else {
        throw ConfigError("unknown eval target: " + what);
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    std::vector<CheckResult> results;
    if (suite == "subsolution") {
        results = run_subsolution_suite(cfg.verify);
    } else if (suite == "cone") {
        results = run_cone_suite(cfg.verify);
    } else if (suite == "laplace") {
        results = run_laplace_suite(cfg.verify);
    } else if (suite == "sandwich") {
        results = run_sandwich_suite(cfg.verify);
    } else if (suite == "all") {
        results = run_all_suites(cfg.verify);
    } else {
        throw ConfigError("unknown verify suite: " + suite);
    }
    print_check_results(std::cout, results);
    return all_passed(results) ? kExitOk : kExitCheckFailed;
}

int cmd_solve(const RunConfig& cfg, const std::string& out) {
    if (!cfg.has_planes) throw ConfigError("solve needs a [planes] block");
    const Params& params = cfg.params;
    const PlaneSpec spec = planes_spec(cfg);
    const SphereMeasure mu = planes_measure(cfg);
    validate(mu);

    const auto boundary = [&](const Eigen::Vector2d& x) {
        return eval_inf_planes(spec, x).value;
    };
    std::function<double(const Eigen::Vector2d&)> initial;
    if (cfg.solve.initial == "sub") {
        initial = [&](const Eigen::Vector2d& x) {
            return eval_phi_star(mu, params, x);
        };
    } else {
        initial = [&](const Eigen::Vector2d& x) {
            return 0.5 * (eval_phi_star(mu, params, x) +
                          eval_inf_planes(spec, x).value);
        };
    }

    const Rect domain{cfg.solve.a1, cfg.solve.b1, cfg.solve.a2, cfg.solve.b2};
    const SolveResult res = solve_dirichlet(domain, cfg.solve.h, boundary,
                                            initial, params, cfg.solve.newton);
    if (out.size() > 4 && out.compare(out.size() - 4, 4, ".bin") == 0) {
        save_grid_binary(out, res.field);
    } else {
        save_grid_csv(out, res.field);
    }
    std::printf(
        "converged in %d iterations (%d on coarser grids), residual %.3e, "
        "wrote %s\n",
        res.iterations, res.coarse_iterations, res.residual_history.back(),
        out.c_str());
    return kExitOk;
}

std::string regime_tag(double offset) {
    if (offset < M_PI - 1e-12) return "lt_pi";
    if (offset > M_PI + 1e-12) return "gt_pi";
    return "eq_pi";
}

int cmd_figures(const RunConfig& cfg) {
    const Params& params = cfg.params;
    const FiguresConfig& f = cfg.figures;
    if (f.n < 2) throw ConfigError("[figures]: n must be at least 2");
    if (f.offsets.empty()) throw ConfigError("[figures]: no sector offsets");

    std::vector<double> radii = f.r_list;
    if (radii.empty()) {
        const double lo = 0.5, hi = 500.0;
        for (int i = 0; i < 257; ++i) {
            radii.push_back(lo * std::pow(hi / lo, i / 256.0));
        }
    }
    double r_need = 2.0 * std::hypot(f.extent, f.extent) + 10.0;
    for (double r : radii) r_need = std::max(r_need, r + 1.0);

    auto cone = std::make_shared<const ConeProfile>(
        solve_cone(params, r_need, 1e-12));

    const std::string dir = f.out_dir.empty() ? "." : f.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + dir + ": " +
                          ec.message());
    }
    std::vector<std::string> surface_files, curve_files, tags;

    for (std::size_t fi = 0; fi < f.offsets.size(); ++fi) {
        const double offset = f.offsets[fi];
        const double theta1 = M_PI / 2 - offset / 2;
        const double theta2 = M_PI / 2 + offset / 2;
        const ArcPiece piece = make_arc_piece(params, theta1, theta2, 1.0, cone);
        const std::string tag = regime_tag(offset);
        tags.push_back(tag);

        const double h = 2.0 * f.extent / (f.n - 1);
        GridField field = make_grid(-f.extent, f.extent, -f.extent, f.extent, h);
        sample_field(field, [&](const Eigen::Vector2d& x) {
            return eval_arc(piece, x);
        }, Exec::Parallel);
        const std::string surf =
            dir + "/arc_surface_" + std::to_string(fi + 1) + "_" + tag + ".csv";
        save_grid_csv(surf, field);
        surface_files.push_back(surf);

        const std::string curve =
            dir + "/interval_" + std::to_string(fi + 1) + "_" + tag + ".csv";
        auto os = open_csv(curve);
        os << "r,theta_lo,theta_hi,width\n";
        char buf[160];
        for (double r : radii) {
            const double tb = theta_bar(*cone, r, piece.value_at_origin);
            const double lo = theta1 + tb;
            const double hi = theta2 - tb;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r, lo,
                          hi, hi - lo);
            os << buf;
        }
        curve_files.push_back(curve);
    }

    const std::string gp = dir + "/figures.gp";
    std::ofstream os(gp);
    if (!os) throw ConfigError("cannot open output file: " + gp);
    os << "# gnuplot script for the arc super-solution surfaces and the\n"
          "# glued-interval curves; run from the output directory.\n"
          "set datafile separator comma\n"
          "set terminal pngcairo size 900,700\n";
    for (std::size_t i = 0; i < surface_files.size(); ++i) {
        os << "set output 'arc_surface_" << i + 1 << "_" << tags[i] << ".png'\n"
           << "set dgrid3d " << cfg.figures.n << "," << cfg.figures.n << "\n"
           << "set hidden3d\n"
           << "splot '" << surface_files[i]
           << "' using 1:2:3 with lines title 'sector offset " << i + 1
           << " (" << tags[i] << ")'\n";
    }
    os << "unset dgrid3d\nset output 'intervals.png'\nset logscale x\n"
          "set xlabel 'r'\nset ylabel 'angle'\nplot ";
    for (std::size_t i = 0; i < curve_files.size(); ++i) {
        os << (i ? ", " : "") << "'" << curve_files[i]
           << "' using 1:2 with lines title 'lower " << tags[i] << "', '"
           << curve_files[i] << "' using 1:3 with lines title 'upper "
           << tags[i] << "'";
    }
    os << "\n";
    std::printf("wrote %zu surface files, %zu interval files, %s\n",
                surface_files.size(), curve_files.size(), gp.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling-graph construction and verification tool"};
    app.require_subcommand(1);

    std::string config_path, out_override, what, suite;
    unsigned long seed = 0;

    CLI::App* eval = app.add_subcommand("eval", "sample a field to CSV");
    eval->add_option("what", what,
                     "one of eikonal, sub, super, arc, cone (default: the "
                     "config's [eval] what)");
    eval->add_option("--config", config_path, "config file path");
    eval->add_option("--out", out_override, "output path override");

    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    verify
        ->add_option("suite", suite,
                     "subsolution, cone, laplace, sandwich, or all")
        ->required();
    verify->add_option("--config", config_path, "config file path");
    verify->add_option("--seed", seed, "random seed override");

    CLI::App* solve = app.add_subcommand("solve", "run the Dirichlet solver");
    solve->add_option("--config", config_path, "config file path");
    solve->add_option("--out", out_override, "output path override");

    CLI::App* figures = app.add_subcommand("figures", "emit figure data");
    figures->add_option("--config", config_path, "config file path");
    figures->add_option("--out", out_override, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig cfg = load_or_default(config_path);
        if (eval->parsed()) {
            const std::string target = what.empty() ? cfg.eval.what : what;
            if (target.empty()) {
                throw ConfigError("eval: no target given on the command line "
                                  "or in [eval] what");
            }
            const std::string out =
                out_override.empty() ? cfg.eval.out : out_override;
            return cmd_eval(cfg, target, out);
        }
        if (verify->parsed()) {
            if (verify->count("--seed") > 0) cfg.verify.seed = seed;
            return cmd_verify(cfg, suite);
        }
        if (solve->parsed()) {
            const std::string out =
                out_override.empty() ? cfg.solve.out : out_override;
            return cmd_solve(cfg, out);
        }
        if (figures->parsed()) {
            if (!out_override.empty()) cfg.figures.out_dir = out_override;
            return cmd_figures(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fmcm::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
