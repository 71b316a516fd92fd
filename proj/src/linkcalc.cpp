// SPDX-License-Identifier: Apache-2.0

#include "rrsel/linkcalc.hpp"

#include "rrsel/quadrature.hpp"
#include "rrsel/rng.hpp"
#include "rrsel/special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace rrsel::linkcalc {

using phy::Rate;

CsiQuality CsiQuality::from_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("CsiQuality: rho must lie in [0, 1]");
    return CsiQuality(rho);
}

CsiQuality CsiQuality::from_nmse(double nmse)
{
    if (!(nmse >= 0.0 && nmse <= 1.0))
        throw std::domain_error("CsiQuality: nmse must lie in [0, 1]");
    return CsiQuality(1.0 - nmse);
}

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::Fixed: return "fixed";
    case Method::Ideal: return "ideal";
    case Method::Optimal: return "optimal";
    case Method::Suboptimal: return "suboptimal";
    case Method::SuboptimalRealized: return "suboptimal_realized";
    }
    return "?";
}

LinkParams LinkParams::from_frame(const phy::FrameSpec& data)
{
    LinkParams p;
    p.nBits = phy::link_bits(data);
    for (Rate r : phy::kAllRates)
        p.duration[phy::index_of(r)] = phy::frame_duration(r, data);
    return p;
}

const LinkParams& LinkParams::standard()
{
    static const LinkParams p = from_frame(phy::data_frame());
    return p;
}

double LinkParams::per_second(Rate r, double snr) const
{
    return phy::packet_success_prob(*ber, r, snr, nBits) / duration[phy::index_of(r)];
}

double rayleigh_snr_pdf(double gamma, double mean)
{
    if (gamma < 0.0)
        return 0.0;
    return std::exp(-gamma / mean) / mean;
}

double selection_pdf(double gamma, double mean, int L)
{
    if (gamma < 0.0)
        return 0.0;
    const double x = gamma / mean;
    double v = L * std::exp(-x) / mean;
    if (L > 1)
        v *= std::pow(-std::expm1(-x), L - 1);
    return v;
}

double rate_throughput(Rate rate, double snr, const LinkParams& p) { return p.per_second(rate, snr); }

namespace {

constexpr double kInnerRel = 1e-10;
constexpr double kOuterRel = 1e-8;

double upper_limit(double mean, int L) { return mean * (30.0 + 10.0 * std::log(L + 1.0)); }

std::vector<double> exponential_breakpoints(double mean, int L)
{
    std::vector<double> pts{0.0};
    for (double k : {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
        pts.push_back(k * mean);
    pts.push_back(upper_limit(mean, L));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Tail mass of the selection density above the upper limit bounds the
// truncation error of any integrand bounded by `bound`.
double tail_bound(double mean, int L, double bound)
{
    return L * std::exp(-upper_limit(mean, L) / mean) * bound;
}

// f(gamma | g) with g the MMSE-scaled estimate and s = avgSnr * nmse.
double conditional_mmse(double gamma, double g, double s)
{
    if (gamma < 0.0)
        return 0.0;
    const double rg = std::sqrt(gamma);
    const double rh = std::sqrt(g);
    const double x = 2.0 * rg * rh / s;
    return std::exp(-(rg - rh) * (rg - rh) / s) * special::bessel_i0e(x) / s;
}

RateChoice best_of(const std::array<double, 4>& v)
{
    RateChoice c{Rate::R1, v[0]};
    for (Rate r : phy::kAllRates)
        if (v[phy::index_of(r)] > c.packetsPerSecond)
            c = {r, v[phy::index_of(r)]};
    return c;
}

struct InnerResult {
    RateChoice choice;
    double error = 0.0;
};

std::vector<double> conditional_breakpoints(double g, double s)
{
    // Breakpoints in the square-root domain, where the density is close to a
    // Gaussian of standard deviation sqrt(s/2) around sqrt(g).
    const double rh = std::sqrt(g);
    const double rs = std::sqrt(s);
    std::vector<double> pts{0.0};
    for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 8.0}) {
        const double r = rh + k * rs;
        if (r > 0.0)
            pts.push_back(r * r);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// E[P_s,r(gamma) | g] / D_r and its error bound.
std::pair<double, double> expected_rate(Rate r, double g, double s, const LinkParams& p)
{
    const auto pts = conditional_breakpoints(g, s);
    auto f = [&](double gamma) { return p.per_second(r, gamma) * conditional_mmse(gamma, g, s); };
    quad::Options opt;
    opt.rel_tol = kInnerRel;
    opt.abs_tol = 1e-14;
    auto res = quad::integrate(f, std::span<const double>(pts), opt);
    return {res.value, res.abs_error + std::exp(-64.0) / p.duration[phy::index_of(r)]};
}

InnerResult optimal_mmse(double g, double s, const LinkParams& p)
{
    std::array<double, 4> v{};
    double err = 0.0;
    for (Rate r : phy::kAllRates) {
        auto [value, e] = expected_rate(r, g, s, p);
        v[phy::index_of(r)] = value;
        err = std::max(err, e);
    }
    return {best_of(v), err};
}

ThroughputResult outer(double mean, int L, Method method, auto&& integrand, double bound)
{
    quad::Options opt;
    opt.rel_tol = kOuterRel;
    opt.abs_tol = 1e-13;
    auto pts = exponential_breakpoints(mean, L);
    auto f = [&](double g) { return integrand(g) * selection_pdf(g, mean, L); };
    ThroughputResult out;
    out.method = method;
    try {
        auto res = quad::integrate(f, std::span<const double>(pts), opt);
        out.packetsPerSecond = res.value;
        out.quadratureError = res.abs_error + tail_bound(mean, L, bound);
    } catch (const quad::NonConvergence& e) {
        out.packetsPerSecond = e.partial().value;
        out.quadratureError = e.partial().abs_error;
        throw quad::NonConvergence(std::string("link throughput: ") + e.what(), e.partial());
    }
    return out;
}

double max_rate_per_second(const LinkParams& p)
{
    double m = 0.0;
    for (double d : p.duration)
        m = std::max(m, 1.0 / d);
    return m;
}

} // namespace

ThroughputResult fixed_rate_throughput(Rate rate, double avgSnr, const LinkParams& p)
{
    if (!(avgSnr > 0.0))
        throw std::domain_error("fixed_rate_throughput: average SNR must be positive");
    auto res = outer(avgSnr, 1, Method::Fixed, [&](double g) { return p.per_second(rate, g); },
                     1.0 / p.duration[phy::index_of(rate)]);
    res.rate = rate;
    return res;
}

RateChoice suboptimal_metric(double estimate, const LinkParams& p)
{
    if (estimate < 0.0)
        throw std::domain_error("suboptimal_metric: negative estimate");
    std::array<double, 4> v{};
    for (Rate r : phy::kAllRates)
        v[phy::index_of(r)] = p.per_second(r, estimate);
    return best_of(v);
}

ThroughputResult ideal_adaptive_throughput(double avgSnr, int L, const LinkParams& p, double overheadSeconds)
{
    if (!(avgSnr > 0.0))
        throw std::domain_error("ideal_adaptive_throughput: average SNR must be positive");
    if (L < 1)
        throw std::domain_error("ideal_adaptive_throughput: L must be at least 1");
    auto value = [&](double g) {
        const auto c = suboptimal_metric(g, p);
        if (overheadSeconds == 0.0)
            return c.packetsPerSecond;
        const double d = p.duration[phy::index_of(c.rate)];
        return c.packetsPerSecond * d / (d + overheadSeconds);
    };
    return outer(avgSnr, L, Method::Ideal, value, max_rate_per_second(p));
}

double conditional_snr_pdf(double gamma, double normalizedEstimate, CsiQuality q, double avgSnr)
{
    if (gamma < 0.0 || normalizedEstimate < 0.0)
        throw std::domain_error("conditional_snr_pdf: negative SNR");
    if (q.rho() >= 1.0)
        throw DegenerateCsi("conditional_snr_pdf: rho = 1 is a point mass at the estimate");
    return conditional_mmse(gamma, q.rho() * normalizedEstimate, avgSnr * q.nmse());
}

RateChoice optimal_metric(double normalizedEstimate, CsiQuality q, double avgSnr, const LinkParams& p)
{
    if (normalizedEstimate < 0.0)
        throw std::domain_error("optimal_metric: negative estimate");
    if (q.rho() >= 1.0)
        return suboptimal_metric(normalizedEstimate, p);
    return optimal_mmse(q.rho() * normalizedEstimate, avgSnr * q.nmse(), p).choice;
}

ThroughputResult avg_imperfect_throughput(double avgSnr, int L, CsiQuality q, Method metric, const LinkParams& p)
{
    if (!(avgSnr > 0.0))
        throw std::domain_error("avg_imperfect_throughput: average SNR must be positive");
    if (L < 1)
        throw std::domain_error("avg_imperfect_throughput: L must be at least 1");
    if (metric != Method::Optimal && metric != Method::Suboptimal && metric != Method::SuboptimalRealized)
        throw std::invalid_argument("avg_imperfect_throughput: metric must be optimal or suboptimal");

    if (q.rho() >= 1.0) {
        auto r = ideal_adaptive_throughput(avgSnr, L, p);
        r.method = metric;
        return r;
    }
    const double s = avgSnr * q.nmse();
    if (q.rho() <= 0.0) {
        // The estimate is identically zero.
        ThroughputResult r;
        r.method = metric;
        if (metric == Method::Suboptimal) {
            r.packetsPerSecond = suboptimal_metric(0.0, p).packetsPerSecond;
        } else if (metric == Method::SuboptimalRealized) {
            const Rate rate = suboptimal_metric(0.0, p).rate;
            auto fixed = fixed_rate_throughput(rate, avgSnr, p);
            r.packetsPerSecond = fixed.packetsPerSecond;
            r.quadratureError = fixed.quadratureError;
            r.rate = rate;
        } else {
            auto c = optimal_mmse(0.0, s, p);
            r.packetsPerSecond = c.choice.packetsPerSecond;
            r.quadratureError = c.error;
            r.rate = c.choice.rate;
        }
        return r;
    }

    const double mean = avgSnr * q.rho();
    if (metric == Method::Suboptimal) {
        return outer(mean, L, metric, [&](double g) { return suboptimal_metric(g, p).packetsPerSecond; },
                     max_rate_per_second(p));
    }
    double worst_inner = 0.0;
    if (metric == Method::SuboptimalRealized) {
        auto res = outer(mean, L, metric,
                         [&](double g) {
                             auto [v, e] = expected_rate(suboptimal_metric(g, p).rate, g, s, p);
                             worst_inner = std::max(worst_inner, e);
                             return v;
                         },
                         max_rate_per_second(p));
        res.quadratureError += worst_inner;
        return res;
    }
    auto res = outer(mean, L, metric,
                     [&](double g) {
                         auto c = optimal_mmse(g, s, p);
                         worst_inner = std::max(worst_inner, c.error);
                         return c.choice.packetsPerSecond;
                     },
                     max_rate_per_second(p));
    res.quadratureError += worst_inner;
    return res;
}

OptimalDecisionTable::OptimalDecisionTable(CsiQuality q, double avgSnr, const LinkParams& p)
{
    const double mean = avgSnr * q.rho();
    auto decide_exact = [&](double g) {
        if (q.rho() <= 0.0)
            return optimal_mmse(0.0, avgSnr, p).choice.rate;
        return optimal_metric(g / q.rho(), q, avgSnr, p).rate;
    };
    first_ = decide_exact(0.0);
    if (q.rho() <= 0.0)
        return;
    // Scan in the square-root domain, then refine every change by bisection.
    const double top = std::sqrt(upper_limit(mean, 4));
    constexpr int kSteps = 600;
    double prev_g = 0.0;
    Rate prev = first_;
    for (int k = 1; k <= kSteps; ++k) {
        const double r = top * k / kSteps;
        const double g = r * r;
        const Rate cur = decide_exact(g);
        if (cur != prev) {
            double lo = prev_g, hi = g;
            for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (decide_exact(mid) == prev ? lo : hi) = mid;
            }
            switches_.push_back({hi, cur});
            prev = cur;
        }
        prev_g = g;
    }
}

Rate OptimalDecisionTable::decide(double estimate) const
{
    Rate r = first_;
    for (const auto& s : switches_) {
        if (estimate < s.at)
            break;
        r = s.rate;
    }
    return r;
}

MonteCarloResult monte_carlo_oracle(const OracleQuery& query, std::int64_t trials, std::uint64_t seed,
                                    const LinkParams& p)
{
    if (trials < 2)
        throw std::domain_error("monte_carlo_oracle: need at least two trials");
    if (query.L < 1)
        throw std::domain_error("monte_carlo_oracle: L must be at least 1");
    Rng rng = make_stream(seed, "linkcalc.oracle");
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

    std::optional<OptimalDecisionTable> table;
    if (query.method == Method::Optimal)
        table.emplace(query.q, query.avgSnr, p);

    const double est_scale = std::sqrt(query.q.rho());
    const double err_scale = std::sqrt(query.q.nmse());
    const int relays = query.method == Method::Fixed ? 1 : query.L;

    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        double best_est = -1.0, best_true = -1.0, chosen_true = 0.0;
        for (int l = 0; l < relays; ++l) {
            const std::complex<double> est(normal(rng) * est_scale, normal(rng) * est_scale);
            const std::complex<double> err(normal(rng) * err_scale, normal(rng) * err_scale);
            const double g_est = query.avgSnr * std::norm(est);
            const double g_true = query.avgSnr * std::norm(est + err);
            best_true = std::max(best_true, g_true);
            if (g_est > best_est) {
                best_est = g_est;
                chosen_true = g_true;
            }
        }
        double score = 0.0;
        switch (query.method) {
        case Method::Fixed: score = p.per_second(query.fixedRate, chosen_true); break;
        case Method::Ideal: score = suboptimal_metric(best_true, p).packetsPerSecond; break;
        case Method::Suboptimal: score = suboptimal_metric(best_est, p).packetsPerSecond; break;
        case Method::SuboptimalRealized:
            score = p.per_second(suboptimal_metric(best_est, p).rate, chosen_true);
            break;
        case Method::Optimal: score = p.per_second(table->decide(best_est), chosen_true); break;
        }
        sum += score;
        sum_sq += score * score;
    }
    const double n = static_cast<double>(trials);
    MonteCarloResult r;
    r.trials = trials;
    r.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * r.mean * r.mean) / (n - 1.0));
    r.standardError = std::sqrt(var / n);
    r.ciLow = r.mean - 1.96 * r.standardError;
    r.ciHigh = r.mean + 1.96 * r.standardError;
    return r;
}

} // namespace rrsel::linkcalc
