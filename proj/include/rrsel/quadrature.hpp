// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive Gauss-Kronrod (G7/K15) quadrature on finite intervals.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrsel::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-9;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Thrown when the error target cannot be met; carries the partial estimate.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, Result partial)
        : std::runtime_error(what), partial_(partial) {}
    const Result& partial() const noexcept { return partial_; }

private:
    Result partial_;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gk15(F& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
        const double s = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[static_cast<std::size_t>(j)] * s;
        if (j % 2 == 1)
            gauss += kGaussWeights[static_cast<std::size_t>(j / 2)] * s;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

/// Integrates f over [points.front(), points.back()], starting from the
/// partition given by `points` (sorted, at least two entries).
template <typename F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {})
{
    if (points.size() < 2)
        throw std::invalid_argument("integrate: need at least two breakpoints");
    std::priority_queue<detail::Segment> heap;
    Result r;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] < points[i])
            throw std::invalid_argument("integrate: breakpoints must be sorted");
        if (points[i + 1] == points[i])
            continue;
        auto s = detail::gk15(f, points[i], points[i + 1]);
        r.evaluations += 15;
        r.value += s.value;
        r.abs_error += s.error;
        heap.push(s);
    }
    double frozen_value = 0.0, frozen_error = 0.0;
    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value)); };
    while (!heap.empty() && r.abs_error > tolerance()) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals)
            throw NonConvergence("integrate: interval limit reached", r);
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point; accept it.
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        r.evaluations += 30;
        r.value += left.value + right.value - worst.value;
        r.abs_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Recompute the sums to shed accumulated rounding from the running updates.
    double value = frozen_value, error = frozen_error;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    r.value = value;
    r.abs_error = error;
    r.converged = true;
    return r;
}

template <typename F>
Result integrate(F&& f, double a, double b, const Options& opt = {})
{
    const std::array<double, 2> pts{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

} // namespace rrsel::quad
