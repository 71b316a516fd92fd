// SPDX-License-Identifier: Apache-2.0

#include "rrsel/special.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace rrsel::special;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// References computed with 40-digit arithmetic.
struct Ref {
    double x;
    double value;
};

// Q1(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I0(a x) dx by composite Simpson
// on a wide finite window, with I0 from its defining integral.
double i0e_by_integral(double x)
{
    const int n = 2000;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = std::numbers::pi * k / n;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * std::exp(x * (std::cos(t) - 1.0));
    }
    return s * (std::numbers::pi / n) / 3.0 / std::numbers::pi;
}

double marcum_by_integral(double a, double b)
{
    const double hi = std::max(a, b) + 40.0;
    const int n = 20000;
    const double h = (hi - b) / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double x = b + k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * x * std::exp(-0.5 * (x - a) * (x - a)) * i0e_by_integral(a * x);
    }
    return s * h / 3.0;
}

} // namespace

TEST_CASE("scaled I0 matches high-precision references across the switchover")
{
    const Ref refs[] = {{0.0, 1.0},
                        {0.5, 0.64503527044915006811},
                        {1.0, 0.4657596075936404365},
                        {5.0, 0.18354081260932835307},
                        {8.0, 0.14343178185685031071},
                        {8.0001, 0.14343085293704762654},
                        {15.0, 0.10389953144882272143},
                        {29.9, 0.073269219046001907707},
                        {30.0, 0.073145946482237293929},
                        {30.1, 0.073023294131060941854},
                        {50.0, 0.05656162664745419253},
                        {200.0, 0.02822715994911191567},
                        {1000.0, 0.012617240455891256586}};
    for (const auto& r : refs)
        CHECK_THAT(bessel_i0e(r.x), WithinRel(r.value, 1e-13));
}

TEST_CASE("scaled I_k for integer orders")
{
    CHECK_THAT(bessel_ie(0, 3.0), WithinRel(bessel_i0e(3.0), 1e-14));
    CHECK_THAT(bessel_ie(1, 1.0), WithinRel(0.20791041534970844887, 1e-12));
    CHECK_THAT(bessel_ie(2, 3.5), WithinRel(0.1157167370947505991, 1e-12));
    CHECK_THAT(bessel_ie(5, 10.0), WithinRel(0.035284293614933962722, 1e-12));
    CHECK_THAT(bessel_ie(3, 40.0), WithinRel(0.056466812232290738025, 1e-12));
    CHECK_THAT(bessel_ie(10, 2.0), WithinRel(4.0830166112655466968e-8, 1e-11));
    CHECK(bessel_ie(4, 0.0) == 0.0);
}

TEST_CASE("J0 reference values and first null")
{
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK_THAT(bessel_j0(0.6283185307179586), WithinAbs(0.90371264209246631948, 1e-14));
    CHECK_THAT(bessel_j0(2.404825557695773), WithinAbs(0.0, 1e-14));
    CHECK_THAT(bessel_j0(10.0), WithinAbs(-0.2459357644513483352, 1e-14));
    CHECK_THAT(bessel_j0(30.0), WithinAbs(-0.086367983581040211336, 1e-14));
}

TEST_CASE("Marcum Q1 against references")
{
    struct Q {
        double a, b, value;
    };
    const Q refs[] = {{0, 1, 0.6065306597126334236},         {1, 2, 0.26901206003590999668},
                      {2, 1, 0.91810769636940600391},        {3, 3, 0.56747976229086150644},
                      {0.5, 4, 0.00073703530680494837886},   {5, 8, 0.0017425515909390834538},
                      {10, 12, 0.025329474297941417811},     {12, 10, 0.9796043623962596068},
                      {20, 25, 3.2175727404389550468e-7}};
    for (const auto& r : refs)
        CHECK_THAT(marcum_q1(r.a, r.b), WithinRel(r.value, 1e-9));
}

TEST_CASE("Marcum Q1 against direct numerical integration")
{
    for (double a : {0.3, 1.7, 4.0})
        for (double b : {0.5, 2.0, 5.5})
            CHECK_THAT(marcum_q1(a, b), WithinAbs(marcum_by_integral(a, b), 1e-9));
}

TEST_CASE("Marcum Q1 boundary values")
{
    CHECK(marcum_q1(3.0, 0.0) == 1.0);
    CHECK_THAT(marcum_q1(0.0, 2.0), WithinRel(std::exp(-2.0), 1e-14));
    // Q1(a, b) + Q1(b, a) = 1 + exp(-(a^2+b^2)/2) I0(ab)
    const double a = 2.5, b = 3.1;
    CHECK_THAT(marcum_q1(a, b) + marcum_q1(b, a),
               WithinRel(1.0 + bessel_i0e(a * b) * std::exp(-0.5 * (a - b) * (a - b)), 1e-12));
}

TEST_CASE("Gaussian tail")
{
    CHECK(gaussian_q(0.0) == 0.5);
    CHECK_THAT(gaussian_q(1.0), WithinRel(0.5 * std::erfc(1.0 / std::numbers::sqrt2), 1e-15));
    CHECK_THAT(gaussian_q(-2.0), WithinRel(1.0 - gaussian_q(2.0), 1e-14));
}
