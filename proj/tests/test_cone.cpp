#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fmcm/cone.hpp"
#include "fmcm/errors.hpp"
#include "fmcm/params.hpp"

using namespace fmcm;
namespace nb = std::numbers;

namespace {

double slope_rhs(const Params& p, double r, double v) {
    const double w = 1.0 + v * v;
    return w * (p.c0 * std::sqrt(w) - p.c - v / r);
}

/// Classical fixed-step RK4 for (v, phi) between two radii.
std::pair<double, double> rk4(const Params& p, double r_lo, double r_hi,
                              double v, double phi, int steps) {
    const double h = (r_hi - r_lo) / steps;
    for (int i = 0; i < steps; ++i) {
        const double r = r_lo + i * h;
        const double k1 = slope_rhs(p, r, v);
        const double k2 = slope_rhs(p, r + h / 2, v + h / 2 * k1);
        const double k3 = slope_rhs(p, r + h / 2, v + h / 2 * k2);
        const double k4 = slope_rhs(p, r + h, v + h * k3);
        const double l1 = v;
        const double l2 = v + h / 2 * k1;
        const double l3 = v + h / 2 * k2;
        const double l4 = v + h * k3;
        v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        phi += h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
    }
    return {v, phi};
}

const ConeProfile& quarter_profile() {
    static const ConeProfile prof = [] {
        ConeProfile c = solve_cone(make_params(nb::pi / 4, 1.0, 3), 1000.0, 1e-12);
        cone_constant(c);
        return c;
    }();
    return prof;
}

}  // namespace

TEST_CASE("slope agrees with a fixed-step integration") {
    for (const Params& p : {make_params(nb::pi / 4, 1.0, 3),
                            make_params(nb::pi / 3, 1.7, 3)}) {
        const ConeProfile prof = solve_cone(p, 200.0, 1e-12);
        const double v1 = eval_v(prof, 1.0);
        const double phi1 = eval_phi_baseline(prof, 1.0);
        const auto [v10, phi10] = rk4(p, 1.0, 10.0, v1, phi1, 30000);
        CHECK(std::fabs(v10 - eval_v(prof, 10.0)) <= 1e-8);
        CHECK(std::fabs(phi10 - eval_phi_baseline(prof, 10.0)) <= 1e-8);
    }
}

TEST_CASE("slope stays inside its bracket") {
    const ConeProfile& prof = quarter_profile();
    const Params& p = prof.params;
    for (double v : prof.v) {
        CHECK(v <= 1e-10);
        CHECK(v >= -p.cot_alpha - 1e-12);
    }
    for (double r = 0.1; r <= 1000.0; r *= 1.9) {
        const double v = eval_v(prof, r);
        CHECK(v <= 0.0);
        CHECK(v >= v0_bracket(p, r) - 1e-8);
    }
    // far field: the slope deficit decays like 2 / (c0 sin(alpha) r)
    const double deficit = eval_v(prof, 1000.0) + p.cot_alpha;
    CHECK(deficit >= 0.0);
    CHECK(deficit <= 2.0 / (p.c0 * std::sin(p.alpha) * 1000.0));
}

TEST_CASE("profile is stable under tolerance and horizon changes") {
    const ConeProfile& prof = quarter_profile();
    const Params p = prof.params;
    const ConeProfile loose = solve_cone(p, 1000.0, 1e-10);
    for (double r : {5.0, 50.0, 500.0}) {
        CHECK(std::fabs(eval_v(prof, r) - eval_v(loose, r)) <= 1e-6);
        CHECK(std::fabs(eval_phi_baseline(prof, r) -
                        eval_phi_baseline(loose, r)) <= 1e-5);
    }
    const ConeProfile shorter = solve_cone(p, 500.0, 1e-12);
    for (double r : {5.0, 50.0, 450.0}) {
        CHECK(std::fabs(eval_v(prof, r) - eval_v(shorter, r)) <= 1e-9);
        CHECK(std::fabs(eval_phi_baseline(prof, r) -
                        eval_phi_baseline(shorter, r)) <= 1e-9);
    }
}

TEST_CASE("opening angle solves its defining relation and decreases") {
    const ConeProfile& prof = quarter_profile();
    const Params& p = prof.params;
    for (double r : {1.0, 3.0, 10.0, 100.0, 400.0}) {
        const double t = theta_bar(prof, r);
        const double phi = eval_phi_baseline(prof, r);
        CHECK(std::fabs(-p.cot_alpha * r * std::cos(t) - phi) <=
              1e-10 * std::max(1.0, std::fabs(phi)));
    }
    CHECK(theta_bar(prof, 1e-3) == doctest::Approx(nb::pi / 2).epsilon(1e-3));
    double prev = nb::pi / 2 + 1e-12;
    for (double r = 1.0; r <= 400.0; r *= 1.5) {
        const double t = theta_bar(prof, r);
        CHECK(t < prev);
        CHECK(t <= nb::pi / 2 + 1e-12);
        prev = t;
    }
    // the normalization argument never changes the angle
    CHECK(theta_bar(prof, 50.0, 123.0) == theta_bar(prof, 50.0));
}

TEST_CASE("asymptotic constant extraction") {
    const ConeProfile& prof = quarter_profile();
    const Params& p = prof.params;
    CHECK(std::isfinite(prof.C_raw));
    CHECK(prof.C_raw_error <= 1e-6);

    const double beta = p.c0 * std::sin(p.alpha);
    const double third = (2.0 - 3.0 * std::sin(p.alpha) * std::sin(p.alpha)) /
                         (p.c0 * p.c0 * std::sin(2.0 * p.alpha));
    const double r = 600.0;
    const double model = -p.cot_alpha * r + std::log(r) / beta + prof.C_raw +
                         third / r;
    CHECK(std::fabs(eval_phi_baseline(prof, r) - model) <= 1e-4);

    CHECK(cone_reference_constant(p) ==
          doctest::Approx(std::log(nb::pi * p.c0 * std::cos(p.alpha)) /
                          (p.c0 * std::sin(p.alpha)))
              .epsilon(1e-14));

    // shifting to a target constant moves the profile rigidly
    CHECK(eval_phi_c(prof, 7.0, prof.C_raw) == eval_phi_baseline(prof, 7.0));
    CHECK(eval_phi_c(prof, 7.0, prof.C_raw + 2.5) ==
          doctest::Approx(eval_phi_baseline(prof, 7.0) + 2.5).epsilon(1e-13));
}

TEST_CASE("planar parameters give the zero profile") {
    const Params p = make_params(nb::pi / 2, 1.3, 3);
    ConeProfile prof = solve_cone(p, 300.0, 1e-12);
    for (double r : {0.0, 5.0, 300.0}) {
        CHECK(eval_v(prof, r) == 0.0);
        CHECK(eval_phi_baseline(prof, r) == 0.0);
    }
    CHECK(cone_constant(prof) == 0.0);
    CHECK_THROWS_AS(theta_bar(prof, 10.0), DomainError);
    CHECK_THROWS_AS(cone_reference_constant(p), DomainError);
}

TEST_CASE("argument validation") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    CHECK_THROWS_AS(solve_cone(p, 5.0, 1e-12), DomainError);
    CHECK_THROWS_AS(solve_cone(p, 100.0, 1e-4), DomainError);
    CHECK_THROWS_AS(solve_cone(p, 100.0, 1e-14), DomainError);
    CHECK_THROWS_AS(v0_bracket(p, 0.0), DomainError);

    const ConeProfile& prof = quarter_profile();
    CHECK_THROWS_AS(eval_v(prof, 1001.0), OutOfRange);
    CHECK_THROWS_AS(eval_v(prof, -1.0), DomainError);

    ConeProfile stub = solve_cone(p, 100.0, 1e-12);
    CHECK_THROWS_AS(cone_constant(stub), DomainError);
}
