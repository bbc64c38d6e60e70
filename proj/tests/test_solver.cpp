#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fmcm/errors.hpp"
#include "fmcm/kernels.hpp"
#include "fmcm/params.hpp"
#include "fmcm/rng.hpp"
#include "fmcm/solver.hpp"
#include "fmcm/subsolution.hpp"
#include "fmcm/supersolution.hpp"

using namespace fmcm;
namespace nb = std::numbers;

namespace {

SphereMeasure k2_measure() {
    SphereMeasure mu;
    mu.add_atom_at_angle(0.0, 1.0);
    mu.add_atom_at_angle(nb::pi, 1.0);
    return mu;
}

PlaneSpec k2_spec(const Params& p) {
    return make_plane_spec_angles(p, {0.0, nb::pi}, {0.0, 0.0});
}

/// Smooth manufactured field with hand derivatives.
struct Manufactured {
    double value(const Eigen::Vector2d& x) const {
        return 0.3 * std::sin(x(0)) * std::cos(x(1));
    }
    Eigen::Vector2d grad(const Eigen::Vector2d& x) const {
        return {0.3 * std::cos(x(0)) * std::cos(x(1)),
                -0.3 * std::sin(x(0)) * std::sin(x(1))};
    }
    Eigen::Matrix2d hess(const Eigen::Vector2d& x) const {
        Eigen::Matrix2d H;
        H(0, 0) = -0.3 * std::sin(x(0)) * std::cos(x(1));
        H(0, 1) = H(1, 0) = -0.3 * std::cos(x(0)) * std::sin(x(1));
        H(1, 1) = -0.3 * std::sin(x(0)) * std::cos(x(1));
        return H;
    }
};

double truncation_max(const Params& p, double h) {
    Manufactured m;
    GridField g = make_grid(-2.0, 2.0, -2.0, 2.0, h);
    fill(g, [&](const Eigen::Vector2d& x) { return m.value(x); });
    std::vector<double> res;
    assemble_residual(g, p, Exec::Serial, res);
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const Eigen::Vector2d x = g.point(i, j);
            const double exact = graph_operator(p, m.grad(x), m.hess(x));
            worst = std::max(
                std::fabs(res[static_cast<std::size_t>(j) * g.nx + i] - exact),
                worst);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("discretization is second-order consistent") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    const double t1 = truncation_max(p, 0.2);
    const double t2 = truncation_max(p, 0.1);
    CHECK(t1 / t2 >= 3.0);
    CHECK(t1 / t2 <= 5.0);

    // the pointwise operator agrees with its dense-matrix twin
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d g(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        Eigen::Matrix2d H;
        H(0, 0) = rng.uniform(-3.0, 3.0);
        H(1, 1) = rng.uniform(-3.0, 3.0);
        H(0, 1) = H(1, 0) = rng.uniform(-3.0, 3.0);
        const double a = graph_operator(p, g, H);
        const double b = mcm_operator(p, g, H);
        CHECK(a == doctest::Approx(b).epsilon(1e-15));
    }
}

TEST_CASE("jacobian matches central differences") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    GridField g = make_grid(0.0, 0.7, 0.0, 0.7, 0.1);
    fill(g, [](const Eigen::Vector2d& x) {
        return 0.3 * std::sin(3.0 * x(0)) + 0.2 * std::cos(2.0 * x(1)) +
               0.05 * std::sin(7.0 * x(0) * x(1));
    });
    const int n = interior_count(g);
    REQUIRE(n == 36);

    std::vector<Eigen::Triplet<double>> trips;
    assemble_jacobian(g, p, Exec::Serial, trips);
    CHECK(trips.size() == static_cast<std::size_t>(9 * n));
    Eigen::SparseMatrix<double> sparse(n, n);
    sparse.setFromTriplets(trips.begin(), trips.end());
    const Eigen::MatrixXd J = Eigen::MatrixXd(sparse);

    const double delta = 1e-6;
    Eigen::MatrixXd J_fd(n, n);
    std::vector<double> plus, minus;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const int col = interior_index(g, i, j);
            const double saved = g.at(i, j);
            g.at(i, j) = saved + delta;
            assemble_residual(g, p, Exec::Serial, plus);
            g.at(i, j) = saved - delta;
            assemble_residual(g, p, Exec::Serial, minus);
            g.at(i, j) = saved;
            for (int jj = 1; jj < g.ny - 1; ++jj) {
                for (int ii = 1; ii < g.nx - 1; ++ii) {
                    const std::size_t node =
                        static_cast<std::size_t>(jj) * g.nx + ii;
                    J_fd(interior_index(g, ii, jj), col) =
                        (plus[node] - minus[node]) / (2.0 * delta);
                }
            }
        }
    }
    CHECK((J - J_fd).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("exact data converges without iterating") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    const double theta = 0.7;
    auto plane = [&](const Eigen::Vector2d& x) {
        return -p.cot_alpha *
               (x(0) * std::cos(theta) + x(1) * std::sin(theta));
    };
    NewtonOptions opts;
    opts.coarse_levels = 0;
    const SolveResult r =
        solve_dirichlet({-2.0, 2.0, -2.0, 2.0}, 0.25, plane, plane, p, opts);
    CHECK(r.iterations == 0);
    CHECK(r.coarse_iterations == 0);
    REQUIRE(r.residual_history.size() == 1);
    CHECK(r.residual_history[0] <= 1e-12);

    // same with the sequencing ladder engaged
    NewtonOptions ladder;
    ladder.coarse_levels = 2;
    const SolveResult r2 =
        solve_dirichlet({-2.0, 2.0, -2.0, 2.0}, 0.25, plane, plane, p, ladder);
    CHECK(r2.iterations == 0);
    CHECK(r2.coarse_iterations == 0);

    // level counts clamp to what the cell count divides: 5 cells -> plain
    const SolveResult r3 =
        solve_dirichlet({0.0, 1.0, 0.0, 1.0}, 0.2, plane, plane, p, ladder);
    CHECK(r3.iterations == 0);

    // planar parameters: any constant is a solution
    const Params flat = make_params(nb::pi / 2, 1.0, 3);
    auto zero = [](const Eigen::Vector2d&) { return 0.0; };
    const SolveResult r4 =
        solve_dirichlet({-2.0, 2.0, -2.0, 2.0}, 0.25, zero, zero, flat, opts);
    CHECK(r4.iterations == 0);
}

TEST_CASE("solved fields respect the sandwich and translate rigidly") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    const SphereMeasure mu = k2_measure();
    const PlaneSpec spec = k2_spec(p);
    auto boundary = [&](const Eigen::Vector2d& x) {
        return eval_inf_planes(spec, x).value;
    };
    auto initial = [&](const Eigen::Vector2d& x) {
        return eval_phi_star(mu, p, x);
    };
    const double h = 0.25;
    NewtonOptions opts;

    const SolveResult a =
        solve_dirichlet({-3.0, 3.0, -3.0, 3.0}, h, boundary, initial, p, opts);
    CHECK(a.iterations >= 1);
    CHECK(a.residual_history.size() ==
          static_cast<std::size_t>(a.iterations) + 1);
    CHECK(a.residual_history.back() <= 1e-10);
    CHECK(a.residual_history.front() > a.residual_history.back());

    // two-sided bounds with decay of the envelope gap away from the edge
    const SandwichCheck chk =
        verify_sandwich(a.field, mu, spec, 10.0 * h * h, {0.5, 1.5, 2.5});
    CHECK(chk.min_lower_margin >= -10.0 * h * h);
    CHECK(chk.max_upper_margin <= 10.0 * h * h);
    REQUIRE(chk.decay.size() == 3);
    for (const auto& row : chk.decay) CHECK(row.nodes > 0);
    CHECK(chk.decay[1].max_abs_gap <= chk.decay[0].max_abs_gap);
    CHECK(chk.decay[2].max_abs_gap <= chk.decay[1].max_abs_gap);

    // discrete slopes honor the gradient bound away from the rim, where
    // centered differences would straddle the kinked Dirichlet data
    const GridField& f = a.field;
    double max_slope = 0.0;
    for (int j = 2; j < f.ny - 2; ++j) {
        for (int i = 2; i < f.nx - 2; ++i) {
            const double gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * h);
            const double gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * h);
            max_slope = std::max(max_slope, std::hypot(gx, gy));
        }
    }
    CHECK(max_slope <= p.cot_alpha + 0.1);

    // the operator has no explicit space dependence
    const Eigen::Vector2d s(0.5, -0.25);
    const SolveResult b = solve_dirichlet(
        {-3.0 + s(0), 3.0 + s(0), -3.0 + s(1), 3.0 + s(1)}, h,
        [&](const Eigen::Vector2d& x) { return boundary(x - s); },
        [&](const Eigen::Vector2d& x) { return initial(x - s); }, p, opts);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.field.values.size(); ++i) {
        max_diff =
            std::max(max_diff, std::fabs(a.field.values[i] - b.field.values[i]));
    }
    CHECK(max_diff <= 1e-8);

    // sequencing depth changes the path, not the answer
    NewtonOptions plain = opts;
    plain.coarse_levels = 0;
    const SolveResult c =
        solve_dirichlet({-3.0, 3.0, -3.0, 3.0}, h, boundary, initial, p, plain);
    double seq_diff = 0.0;
    for (std::size_t i = 0; i < a.field.values.size(); ++i) {
        seq_diff =
            std::max(seq_diff, std::fabs(a.field.values[i] - c.field.values[i]));
    }
    CHECK(seq_diff <= 1e-9);

    // a bumped node escapes the sandwich
    GridField bumped = a.field;
    bumped.at(bumped.nx / 2, bumped.ny / 2) += 3.0;
    CHECK_THROWS_AS(verify_sandwich(bumped, mu, spec, 0.01),
                    SandwichViolation);
}

TEST_CASE("failure modes surface as typed errors") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    auto zero = [](const Eigen::Vector2d&) { return 0.0; };
    const Rect box{-2.0, 2.0, -2.0, 2.0};

    NewtonOptions bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, p, bad), DomainError);
    bad = {};
    bad.residual_tol = 1e-13;
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, p, bad), DomainError);
    bad = {};
    bad.damping = 0.0;
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, p, bad), DomainError);
    bad = {};
    bad.damping = 1.5;
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, p, bad), DomainError);
    bad = {};
    bad.coarse_levels = -1;
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, p, bad), DomainError);

    const Params high = make_params(nb::pi / 4, 1.0, 4);
    CHECK_THROWS_AS(solve_dirichlet(box, 0.25, zero, zero, high, NewtonOptions{}),
                    DomainError);

    // a single iteration cannot absorb a steep kinked seed
    const Params steep = make_params(0.3, 1.0, 3);
    const PlaneSpec spec = make_plane_spec_angles(
        steep, {nb::pi / 2, 7 * nb::pi / 6, 11 * nb::pi / 6}, {0.0, 0.0, 0.0});
    auto env = [&](const Eigen::Vector2d& x) {
        return eval_inf_planes(spec, x).value;
    };
    NewtonOptions one;
    one.max_iters = 1;
    CHECK_THROWS_AS(
        solve_dirichlet({-5.0, 5.0, -5.0, 5.0}, 0.5, env, env, steep, one),
        NonConvergence);
}

TEST_CASE("curvature probe on model fields") {
    GridField plane = make_grid(-1.0, 1.0, -1.0, 1.0, 0.25);
    fill(plane, [](const Eigen::Vector2d& x) { return 3.0 * x(0) - x(1); });
    CHECK(std::fabs(concavity_probe(plane)) <= 1e-9);

    GridField bowl = make_grid(-1.0, 1.0, -1.0, 1.0, 0.25);
    fill(bowl, [](const Eigen::Vector2d& x) { return x.squaredNorm(); });
    CHECK(concavity_probe(bowl) == doctest::Approx(2.0).epsilon(1e-13));

    GridField dome = make_grid(-1.0, 1.0, -1.0, 1.0, 0.25);
    fill(dome, [](const Eigen::Vector2d& x) { return -x.squaredNorm(); });
    CHECK(concavity_probe(dome) == doctest::Approx(-2.0).epsilon(1e-13));

    GridField tiny = make_grid(0.0, 1.0, 0.0, 1.0, 0.2);
    CHECK_THROWS_AS(concavity_probe(tiny), DomainError);
}

TEST_CASE("sandwich checker argument validation") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    const SphereMeasure mu = k2_measure();
    const PlaneSpec spec = k2_spec(p);
    GridField ok = make_grid(-1.0, 1.0, -1.0, 1.0, 0.5);
    fill(ok, [&](const Eigen::Vector2d& x) {
        return eval_phi_star(mu, p, x);
    });
    CHECK_THROWS_AS(verify_sandwich(ok, mu, spec, -1.0), DomainError);

    GridField line = make_grid(0.0, 1.0, 0.0, 0.5, 0.5);
    CHECK_THROWS_AS(verify_sandwich(line, mu, spec, 0.1), DomainError);

    // the residual convenience wrapper mirrors the serial kernel
    std::vector<double> direct;
    assemble_residual(ok, p, Exec::Serial, direct);
    const std::vector<double> wrapped = residual_field(ok, p);
    REQUIRE(direct.size() == wrapped.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(direct[i] == wrapped[i]);
}
