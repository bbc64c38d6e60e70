#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include "fmcm/config.hpp"
#include "fmcm/errors.hpp"
#include "fmcm/grid.hpp"
#include "fmcm/supersolution.hpp"

using namespace fmcm;

namespace {

GridField rough_grid() {
    // dyadic layout: every node coordinate is exact in binary
    GridField g = make_grid(-2.0, 2.0, -1.0, 1.5, 0.25);
    fill(g, [](const Eigen::Vector2d& x) {
        return std::sin(12.9898 * x(0) + 78.233 * x(1)) * 437.585453;
    });
    return g;
}

bool same_bits(const GridField& a, const GridField& b) {
    if (a.nx != b.nx || a.ny != b.ny) return false;
    if (a.a1 != b.a1 || a.a2 != b.a2 || a.h != b.h) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] != b.values[i]) return false;
    }
    return true;
}

std::string config_message(const std::string& text) {
    std::istringstream is(text);
    try {
        parse_config(is);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("grid construction and filling") {
    GridField g = make_grid(-1.0, 1.0, 0.0, 1.0, 0.5);
    CHECK(g.nx == 5);
    CHECK(g.ny == 3);
    CHECK(g.x1(0) == -1.0);
    CHECK(g.x1(4) == 1.0);
    CHECK(g.x2(2) == 1.0);
    for (double v : g.values) CHECK(v == 0.0);

    fill(g, [](const Eigen::Vector2d& x) { return x(0) + 10.0 * x(1); });
    CHECK(g.at(1, 2) == -0.5 + 10.0);
    CHECK(g.at(4, 0) == 1.0);

    GridField b = make_grid(-1.0, 1.0, 0.0, 1.0, 0.5);
    fill_boundary(b, [](const Eigen::Vector2d&) { return 1.0; });
    int rim = 0;
    for (int j = 0; j < b.ny; ++j) {
        for (int i = 0; i < b.nx; ++i) {
            const bool on_rim =
                i == 0 || j == 0 || i == b.nx - 1 || j == b.ny - 1;
            CHECK(b.at(i, j) == (on_rim ? 1.0 : 0.0));
            rim += on_rim;
        }
    }
    CHECK(rim == 2 * b.nx + 2 * b.ny - 4);

    // a (b - a)/h that is integral only within the stated 1e-9 slack
    const GridField wide = make_grid(-20.0, 20.0, -20.0, 20.0, 0.1);
    CHECK(wide.nx == 401);
    CHECK(wide.ny == 401);

    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0, 1.0, 0.3), DomainError);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0, 1.0, -0.5), DomainError);
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 0.0, 1.0, 0.5), DomainError);
}

TEST_CASE("csv grid round trip is exact") {
    const GridField g = rough_grid();
    std::stringstream ss;
    write_grid_csv(ss, g);
    std::string text = ss.str();
    CHECK(text.rfind("x1,x2,value\n", 0) == 0);
    std::istringstream is(text);
    const GridField rt = read_grid_csv(is);
    CHECK(same_bits(g, rt));
}

TEST_CASE("csv grid rejects malformed input") {
    {
        std::istringstream is("a,b,c\n1,2,3\n");
        CHECK_THROWS_AS(read_grid_csv(is), ConfigError);
    }
    {
        std::istringstream is("x1,x2,value\n1,2,oops\n");
        CHECK_THROWS_AS(read_grid_csv(is), ConfigError);
    }
    {
        std::istringstream is("x1,x2,value\n");
        CHECK_THROWS_AS(read_grid_csv(is), ConfigError);
    }
    {
        // four rows cannot tile a three-column grid
        std::istringstream is(
            "x1,x2,value\n0,0,1\n1,0,1\n2,0,1\n0,1,1\n1,1,1\n");
        CHECK_THROWS_AS(read_grid_csv(is), ConfigError);
    }
}

TEST_CASE("binary grid round trip is exact") {
    GridField g = make_grid(-20.0, 20.0, -20.0, 20.0, 0.1);
    fill(g, [](const Eigen::Vector2d& x) {
        return std::cos(3.7 * x(0)) * std::exp(0.05 * x(1));
    });
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    write_grid_binary(ss, g);
    const GridField rt = read_grid_binary(ss);
    CHECK(same_bits(g, rt));

    const std::string path = "grid_io_roundtrip.bin";
    save_grid_binary(path, g);
    const GridField from_file = load_grid_binary(path);
    CHECK(same_bits(g, from_file));
    std::remove(path.c_str());

    const std::string csv_path = "grid_io_roundtrip.csv";
    save_grid_csv(csv_path, rough_grid());
    CHECK(same_bits(rough_grid(), load_grid_csv(csv_path)));
    std::remove(csv_path.c_str());
}

TEST_CASE("binary grid rejects corrupted streams") {
    const GridField g = rough_grid();
    std::ostringstream os(std::ios::binary);
    write_grid_binary(os, g);
    const std::string blob = os.str();

    {
        std::string bad = blob;
        bad[0] = 'X';
        std::istringstream is(bad, std::ios::binary);
        CHECK_THROWS_AS(read_grid_binary(is), ConfigError);
    }
    {
        std::istringstream is(blob.substr(0, blob.size() / 2),
                              std::ios::binary);
        CHECK_THROWS_AS(read_grid_binary(is), ConfigError);
    }
    {
        // implausible node count in the header
        std::string bad = blob;
        bad[8] = static_cast<char>(0xFF);
        bad[9] = static_cast<char>(0xFF);
        bad[10] = static_cast<char>(0xFF);
        bad[11] = static_cast<char>(0xFF);
        std::istringstream is(bad, std::ios::binary);
        CHECK_THROWS_AS(read_grid_binary(is), ConfigError);
    }
}

TEST_CASE("config text reaches a canonical fixed point") {
    const std::string text = R"(# full-surface run
[params]
alpha = 0.9
c0 = 1.25
dim = 3

[measure]
atom = 0.3 0.7    # direction, mass
atom = 2.0 2.2
arc = 3.0 4.5

[planes]
plane = 0.0 0.0
plane = 3.141592653589793 inf
weight = 1.5 2.0

[profile]
theta = 0.8
theta = 2.3
sigma = 1 0
lambda0 = 0.75

[arc]
theta1 = 0.4
theta2 = 2.0
lambda = 1.25

[eval]
what = sub
grid = -4 4 -4 4 0.5
point = 1.0 2.0
point = -3.5 0.25
r = 10
r = 100
r_max = 500
tol = 1e-9
format = bin
out = field.bin

[solve]
domain = -10 10 -10 10
h = 0.2
max_iters = 30
residual_tol = 1e-9
damping = 0.5
levels = 3
exec = serial
initial = mid
out = solution.csv

[verify]
seed = 42
n_measures = 7
n_points = 11
r_list = 10 20 40
k = 3

[figures]
out_dir = figs
extent = 5.5
n = 61
r_list = 1 2 4 8
offsets = 2.0 3.0 4.0
)";
    std::istringstream is(text);
    const RunConfig cfg = parse_config(is);

    CHECK(cfg.params.alpha == 0.9);
    CHECK(cfg.params.c0 == 1.25);
    CHECK(cfg.verify.params.alpha == 0.9);
    CHECK(cfg.verify.params.c0 == 1.25);
    REQUIRE(cfg.measure.atoms.size() == 2);
    REQUIRE(cfg.measure.arcs.size() == 1);
    REQUIRE(cfg.planes.size() == 3);
    CHECK(std::isinf(cfg.planes[1].gamma));
    CHECK(cfg.planes[1].lambda == 0.0);
    CHECK(cfg.planes[0].lambda == 1.0);
    CHECK(cfg.planes[2].lambda == 2.0);
    CHECK(cfg.planes[2].gamma ==
          doctest::Approx(weight_intercept(cfg.params, 2.0)).epsilon(1e-15));
    CHECK(cfg.profile_thetas.size() == 2);
    CHECK(cfg.profile_sigmas == std::vector<int>{1, 0});
    CHECK(cfg.lambda0 == 0.75);
    CHECK(cfg.arc.present);
    CHECK(cfg.eval.what == "sub");
    CHECK(cfg.eval.has_grid);
    CHECK(cfg.eval.points.size() == 2);
    CHECK(cfg.eval.radii == std::vector<double>{10.0, 100.0});
    CHECK(cfg.eval.format == "bin");
    CHECK(cfg.solve.newton.max_iters == 30);
    CHECK(cfg.solve.newton.coarse_levels == 3);
    CHECK(cfg.solve.newton.exec == Exec::Serial);
    CHECK(cfg.solve.initial == "mid");
    CHECK(cfg.verify.seed == 42);
    CHECK(cfg.verify.r_list == std::vector<double>{10.0, 20.0, 40.0});
    CHECK(cfg.verify.k == 3);
    CHECK(cfg.figures.r_list == std::vector<double>{1.0, 2.0, 4.0, 8.0});
    CHECK(cfg.figures.offsets[1] == 3.0);

    // atoms round-trip through angle extraction, exact to an ulp
    std::istringstream isr(render_config(cfg));
    const RunConfig back = parse_config(isr);
    REQUIRE(back.measure.atoms.size() == cfg.measure.atoms.size());
    for (std::size_t i = 0; i < back.measure.atoms.size(); ++i) {
        CHECK((back.measure.atoms[i].nu - cfg.measure.atoms[i].nu).norm() <=
              1e-15);
        CHECK(back.measure.atoms[i].mass == cfg.measure.atoms[i].mass);
    }

    // every other field renders to a canonical fixed point
    RunConfig trimmed = cfg;
    trimmed.measure.atoms.clear();
    const std::string first = render_config(trimmed);
    std::istringstream is2(first);
    const RunConfig cfg2 = parse_config(is2);
    const std::string second = render_config(cfg2);
    CHECK(first == second);
}

TEST_CASE("config parser reports location and cause") {
    CHECK(config_message("[params]\nalpha = 0.9\nbogus = 1\n")
              .find("line 3") != std::string::npos);
    CHECK(config_message("[nonsense]\n").find("unknown section") !=
          std::string::npos);
    CHECK(config_message("alpha = 0.9\n").find("outside any section") !=
          std::string::npos);
    CHECK(config_message("[params\n").find("malformed section") !=
          std::string::npos);
    CHECK(config_message("[params]\nalpha = fast\n").find("not a number") !=
          std::string::npos);
    CHECK(config_message("[params]\nalpha = 2.5\n").find("[params]") !=
          std::string::npos);
    CHECK(config_message("[eval]\nformat = yaml\n")
              .find("format must be csv or bin") != std::string::npos);
    CHECK(config_message("[solve]\nexec = gpu\n")
              .find("exec must be serial or parallel") != std::string::npos);
    CHECK(config_message("[solve]\ninitial = zero\n")
              .find("initial must be sub or mid") != std::string::npos);
    CHECK(config_message("[verify]\nk = 5\n").find("k must be 0, 2, or 3") !=
          std::string::npos);
    CHECK(config_message("[planes]\nweight = 0.0 -1\n")
              .find("weight must be positive") != std::string::npos);
    CHECK(config_message("[measure]\narc = 2.0 1.0\n").find("[measure]") !=
          std::string::npos);
    CHECK(config_message("[params]\nalpha = 0.9 0.8\n")
              .find("expects 1 value(s)") != std::string::npos);
    CHECK(config_message("[profile]\nsigma = 2\n")
              .find("sigma entries must be 0 or 1") != std::string::npos);

    CHECK_THROWS_AS(load_config("no_such_file_anywhere.cfg"), ConfigError);
}

TEST_CASE("plane blocks convert to specs and measures") {
    const std::string text =
        "[params]\nalpha = 0.7853981633974483\nc0 = 1\ndim = 3\n"
        "[planes]\nplane = 0.0 0.0\nplane = 3.141592653589793 inf\n"
        "weight = 1.5 2.0\n";
    std::istringstream is(text);
    const RunConfig cfg = parse_config(is);

    const PlaneSpec spec = planes_spec(cfg);
    REQUIRE(spec.entries.size() == 3);
    CHECK(spec.entries[0].gamma == 0.0);
    CHECK(std::isinf(spec.entries[1].gamma));

    const SphereMeasure mu = planes_measure(cfg);
    REQUIRE(mu.atoms.size() == 2);  // the inf plane carries no mass
    CHECK(mu.total_mass() == doctest::Approx(3.0).epsilon(1e-15));

    RunConfig no_planes;
    CHECK_THROWS_AS(planes_spec(no_planes), ConfigError);
    CHECK_THROWS_AS(planes_measure(no_planes), ConfigError);
}
