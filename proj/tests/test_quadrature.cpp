// SPDX-License-Identifier: Apache-2.0

#include "rrsel/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace rrsel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("smooth integrands")
{
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(2.0, 1e-12));

    r = quad::integrate([](double x) { return std::exp(-x); }, 0.0, 50.0);
    CHECK_THAT(r.value, WithinRel(1.0 - std::exp(-50.0), 1e-12));
    CHECK(r.abs_error < 1e-9);
}

TEST_CASE("low-degree polynomials need a single panel")
{
    auto r = quad::integrate([](double x) { return std::pow(x, 12) + 3.0 * x * x; }, -1.0, 1.0);
    CHECK_THAT(r.value, WithinRel(2.0 / 13.0 + 2.0, 1e-14));
    CHECK(r.evaluations == 15);
}

TEST_CASE("breakpoints resolve a kink and a narrow peak")
{
    const double pts[] = {0.0, 0.3, 1.0};
    auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, pts);
    CHECK_THAT(r.value, WithinRel(0.5 * (0.09 + 0.49), 1e-13));

    auto peak = [](double x) { return 1.0 / (1e-4 + (x - 0.5) * (x - 0.5)); };
    r = quad::integrate(peak, 0.0, 1.0);
    const double exact = 2.0 * std::atan(0.5 / 1e-2) / 1e-2;
    CHECK_THAT(r.value, WithinRel(exact, 1e-9));
}

TEST_CASE("empty interval and reversed breakpoints")
{
    auto r = quad::integrate([](double) { return 1.0; }, 2.0, 2.0);
    CHECK(r.value == 0.0);
    const double bad[] = {1.0, 0.0};
    CHECK_THROWS_AS(quad::integrate([](double x) { return x; }, bad), std::invalid_argument);
}

TEST_CASE("non-convergence reports the partial estimate")
{
    quad::Options opt;
    opt.rel_tol = 1e-15;
    opt.max_intervals = 3;
    try {
        quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
        FAIL("expected NonConvergence");
    } catch (const quad::NonConvergence& e) {
        CHECK_FALSE(e.partial().converged);
        CHECK_THAT(e.partial().value, WithinAbs(2.0, 0.2));
    }
}
