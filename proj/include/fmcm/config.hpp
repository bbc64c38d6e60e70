#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fmcm/eikonal.hpp"
#include "fmcm/measure.hpp"
#include "fmcm/params.hpp"
#include "fmcm/solver.hpp"

namespace fmcm {

/**
 * Plain-text run configuration.  Grammar (docs/FORMATS.md): `[section]`
 * headers, `key = value` lines, `#` comments, whitespace-separated value
 * tokens, angles in radians.  Repeatable keys (atom, arc, plane, weight,
 * point, theta) accumulate in file order.  Unknown sections or keys are
 * rejected.
 */

struct PlaneEntryConfig {
    double angle;
    double gamma;   // intercept; +inf allowed
    double lambda;  // matched Dirac mass, exp(-gamma c0 sin(alpha) / 2)
};

struct ArcConfig {
    bool present = false;
    double theta1 = 0.0;
    double theta2 = 3.141592653589793;
    double lambda = 1.0;
};

struct EvalConfig {
    std::string what;  // eikonal | sub | super | arc | cone
    bool has_grid = false;
    double a1 = -10.0, b1 = 10.0, a2 = -10.0, b2 = 10.0, h = 0.5;
    std::vector<Eigen::Vector2d> points;
    std::vector<double> radii;  // cone eval sample radii
    double r_max = 1000.0;
    double tol = 1e-10;
    std::string format = "csv";  // csv | bin
    std::string out = "eval.csv";
};

struct SolveConfig {
    double a1 = -20.0, b1 = 20.0, a2 = -20.0, b2 = 20.0;
    double h = 0.1;
    NewtonOptions newton;
    std::string initial = "sub";  // sub | mid
    std::string out = "solve.csv";
};

struct VerifyConfig {
    unsigned long seed = 0;
    int n_measures = 100;
    int n_points = 100;
    std::vector<double> r_list = {25.0, 50.0, 100.0, 200.0, 400.0};
    int k = 0;  // sandwich suite: 2, 3, or 0 for both
    /// Used by the laplace and sandwich suites; parse_config copies the
    /// [params] block here.  The other suites pin their own parameters.
    Params params = make_params(0.7853981633974483, 1.0, 3);
};

struct FiguresConfig {
    std::string out_dir = ".";
    double extent = 6.0;
    int n = 121;
    std::vector<double> r_list;  // I_r curve radii; default geometric
    std::vector<double> offsets = {2.356194490192345, 3.141592653589793,
                                   3.926990816987241};
};

struct RunConfig {
    Params params;
    bool has_measure = false;
    SphereMeasure measure;
    bool has_planes = false;
    std::vector<PlaneEntryConfig> planes;
    bool has_profile = false;
    std::vector<double> profile_thetas;
    std::vector<int> profile_sigmas;
    double lambda0 = 1.0;
    ArcConfig arc;
    EvalConfig eval;
    SolveConfig solve;
    VerifyConfig verify;
    FiguresConfig figures;

    RunConfig();
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse(render(c)) reproduces c.
std::string render_config(const RunConfig& config);

/// Inf-of-planes spec from the [planes] block.
PlaneSpec planes_spec(const RunConfig& config);

/// Matched Dirac measure (mass lambda_i at angle_i) for the [planes] block.
SphereMeasure planes_measure(const RunConfig& config);

}  // namespace fmcm
