#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fmcm/errors.hpp"
#include "fmcm/params.hpp"
#include "fmcm/rng.hpp"

using namespace fmcm;
namespace nb = std::numbers;

TEST_CASE("planar limit alpha = pi/2") {
    const Params p = make_params(nb::pi / 2, 1.0, 3);
    CHECK(p.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(p.cot_alpha) < 1e-15);
    CHECK(std::abs(p.b) < 1e-15);
}

TEST_CASE("alpha = pi/4, c0 = 1") {
    const Params p = make_params(nb::pi / 4, 1.0, 3);
    CHECK(p.c == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.cot_alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.b == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
}

TEST_CASE("alpha = pi/6, c0 = 2") {
    const Params p = make_params(nb::pi / 6, 2.0, 3);
    CHECK(p.c == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(p.cot_alpha == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(p.b == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("derived quantities satisfy their identities") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform(1e-3, nb::pi / 2);
        const double c0 = rng.uniform(1e-3, 50.0);
        const Params p = make_params(alpha, c0, 3);
        CHECK(p.c * std::sin(alpha) == doctest::Approx(c0).epsilon(1e-13));
        CHECK(p.b == doctest::Approx(c0 * std::cos(alpha)).epsilon(1e-13));
        CHECK(p.c * p.c ==
              doctest::Approx(c0 * c0 * (1.0 + p.cot_alpha * p.cot_alpha))
                  .epsilon(1e-12));
        CHECK(p.b * p.c == doctest::Approx(c0 * c0 * p.cot_alpha).epsilon(1e-12));
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(make_params(0.0, 1.0, 3), DomainError);
    CHECK_THROWS_AS(make_params(-0.3, 1.0, 3), DomainError);
    CHECK_THROWS_AS(make_params(nb::pi / 2 + 1e-9, 1.0, 3), DomainError);
    CHECK_THROWS_AS(make_params(nb::pi / 4, 0.0, 3), DomainError);
    CHECK_THROWS_AS(make_params(nb::pi / 4, -1.0, 3), DomainError);
    CHECK_THROWS_AS(make_params(nb::pi / 4, 1.0, 1), DomainError);
    CHECK_NOTHROW(make_params(nb::pi / 2, 1.0, 2));
}

TEST_CASE("polar conversion") {
    const PolarPoint o = to_polar(Eigen::Vector2d(0.0, 0.0));
    CHECK(o.r == 0.0);
    CHECK(o.theta == 0.0);

    const PolarPoint p = to_polar(Eigen::Vector2d(1.0, 1.0));
    CHECK(p.r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.theta == doctest::Approx(nb::pi / 4).epsilon(1e-15));

    const PolarPoint q = to_polar(Eigen::Vector2d(1.0, -1.0));
    CHECK(q.theta == doctest::Approx(7 * nb::pi / 4).epsilon(1e-15));

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector2d x = rng.in_disk(10.0);
        const PolarPoint pp = to_polar(x);
        CHECK(pp.theta >= 0.0);
        CHECK(pp.theta < 2 * nb::pi);
        CHECK(pp.r * std::cos(pp.theta) == doctest::Approx(x.x()).epsilon(1e-12));
        CHECK(pp.r * std::sin(pp.theta) == doctest::Approx(x.y()).epsilon(1e-12));
    }
}
