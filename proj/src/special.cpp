// SPDX-License-Identifier: Apache-2.0

#include "rrsel/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rrsel::special {

namespace {

// Above this argument the asymptotic series is accurate to double precision.
constexpr double kI0Switchover = 30.0;

double i0e_series(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum * std::exp(-x);
}

double i0e_asymptotic(double x)
{
    // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd / (k * 8.0 * x);
        if (next > term)
            break;
        term = next;
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Ratios I_k(x)/I_0(x), k = 0..kmax, by Miller's backward recurrence.
void bessel_i_ratios(double x, int kmax, std::vector<double>& out)
{
    out.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    out[0] = 1.0;
    if (kmax == 0 || x == 0.0)
        return;
    const int start = kmax + 20 + static_cast<int>(std::ceil(std::sqrt(80.0 * x + double(kmax) * kmax)));
    double next = 0.0;   // I_{n+1}
    double cur = 1e-300; // I_n
    for (int n = start; n > 0; --n) {
        const double prev = (2.0 * n / x) * cur + next; // I_{n-1}
        next = cur;
        cur = prev;
        if (n - 1 <= kmax)
            out[static_cast<std::size_t>(n - 1)] = cur;
        if (cur > 1e250) {
            // Rescale to stay in range; only ratios matter.
            next *= 1e-250;
            cur *= 1e-250;
            for (int k = n - 1; k <= kmax; ++k)
                out[static_cast<std::size_t>(k)] *= 1e-250;
        }
    }
    const double i0 = out[0];
    for (auto& v : out)
        v /= i0;
}

} // namespace

double bessel_i0e(double x)
{
    if (x < 0.0)
        x = -x;
    return x < kI0Switchover ? i0e_series(x) : i0e_asymptotic(x);
}

double bessel_ie(int k, double x)
{
    if (k < 0)
        k = -k;
    if (k == 0)
        return bessel_i0e(x);
    if (x == 0.0)
        return 0.0;
    thread_local std::vector<double> ratios;
    bessel_i_ratios(x, k, ratios);
    return ratios[static_cast<std::size_t>(k)] * bessel_i0e(x);
}

double bessel_j0(double x)
{
    return std::cyl_bessel_j(0.0, std::abs(x));
}

double marcum_q1(double a, double b)
{
    if (a < 0.0 || b < 0.0)
        throw std::domain_error("marcum_q1: negative argument");
    if (b == 0.0)
        return 1.0;
    if (a == 0.0)
        return std::exp(-0.5 * b * b);

    // Q1(a,b) = e^{-(a^2+b^2)/2} sum_{k>=0} (a/b)^k I_k(ab)          for a < b
    // Q1(a,b) = 1 - e^{-(a^2+b^2)/2} sum_{k>=1} (b/a)^k I_k(ab)      for a > b
    // Written with scaled Bessel values so that e^{-(a-b)^2/2} carries the magnitude.
    const double x = a * b;
    const double scale = std::exp(-0.5 * (a - b) * (a - b)) * bessel_i0e(x);
    const bool small_a = a < b;
    const double r = small_a ? a / b : b / a;
    if (r == 1.0) {
        // Q1(a,a) = (1 + e^{-a^2} I0(a^2)) / 2
        return 0.5 * (1.0 + bessel_i0e(x));
    }
    int kmax = static_cast<int>(std::ceil(std::log(1e-18) / std::log(r)));
    if (kmax > 4000)
        kmax = 4000;
    thread_local std::vector<double> ratios;
    bessel_i_ratios(x, kmax, ratios);
    double sum = 0.0;
    double rk = small_a ? 1.0 : r;
    for (int k = small_a ? 0 : 1; k <= kmax; ++k) {
        sum += rk * ratios[static_cast<std::size_t>(k)];
        rk *= r;
    }
    return small_a ? scale * sum : 1.0 - scale * sum;
}

double gaussian_q(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

} // namespace rrsel::special
