// SPDX-License-Identifier: Apache-2.0
//
// Link throughput of rate and relay selection under Rayleigh fading with
// perfect and imperfect CSI, by adaptive quadrature, with an independent
// Monte-Carlo estimator for cross-checking.
//
// Two scalings of the CSI estimate appear below:
//  * the MMSE power estimate g = avgSnr * |h_hat|^2, whose mean is
//    avgSnr * (1 - nmse); this is what a transmitter holds and what the
//    selection-diversity density of the estimate is written in;
//  * the normalized estimate g / rho, which has the same mean avgSnr as the
//    true SNR; the bivariate conditional density is written in this one.

#pragma once

#include "rrsel/phy.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rrsel::linkcalc {

/// CSI accuracy: correlation rho between true and estimated SNR, nmse = 1 - rho.
class CsiQuality {
public:
    static CsiQuality from_rho(double rho);
    static CsiQuality from_nmse(double nmse);
    double rho() const { return rho_; }
    double nmse() const { return 1.0 - rho_; }

private:
    explicit CsiQuality(double rho) : rho_(rho) {}
    double rho_;
};

/// Suboptimal is the metric value max_i P_s,i(g)/D_i averaged over the
/// estimate density (it tends to zero as the estimate collapses);
/// SuboptimalRealized scores the same decisions on the true SNR.
enum class Method { Fixed, Ideal, Optimal, Suboptimal, SuboptimalRealized };
std::string_view method_name(Method m);

struct ThroughputResult {
    double packetsPerSecond = 0.0;
    Method method = Method::Ideal;
    std::optional<phy::Rate> rate; // set for Fixed and for per-estimate metrics
    double quadratureError = 0.0;  // estimated absolute error, packets/s
};

struct RateChoice {
    phy::Rate rate = phy::Rate::R1;
    double packetsPerSecond = 0.0;
};

/// Packet-level link parameters: N for the success model and D_i per rate.
struct LinkParams {
    int nBits = 0;
    std::array<double, 4> duration{};
    const phy::BerModel* ber = &phy::BerModel::standard();

    static LinkParams from_frame(const phy::FrameSpec& data);
    static const LinkParams& standard();
    double per_second(phy::Rate r, double snr) const;
};

/// Raised when a requested degenerate case has no density (rho = 1).
class DegenerateCsi : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kRelTolerance = 1e-6;

/// Exponential SNR density with mean `mean`.
double rayleigh_snr_pdf(double gamma, double mean);

/// Density of the largest of L i.i.d. exponential SNRs with mean `mean`.
double selection_pdf(double gamma, double mean, int L);

/// P_s,i(gamma) / D_i for one rate; throughput of fixed rate i at SNR gamma.
double rate_throughput(phy::Rate rate, double snr, const LinkParams& p = LinkParams::standard());

/// Fixed-rate average over the Rayleigh density.
ThroughputResult fixed_rate_throughput(phy::Rate rate, double avgSnr,
                                       const LinkParams& p = LinkParams::standard());

/// Ideal-CSI rate-and-relay adaptation with L relays. `overheadSeconds` adds
/// a per-attempt contention time to every D_i in the denominator while the
/// rate decision still maximizes P_s/D_i; zero gives the plain link value.
ThroughputResult ideal_adaptive_throughput(double avgSnr, int L,
                                           const LinkParams& p = LinkParams::standard(),
                                           double overheadSeconds = 0.0);

/// f(gamma | estimate) with the estimate in normalized scale (mean avgSnr).
double conditional_snr_pdf(double gamma, double normalizedEstimate, CsiQuality q, double avgSnr);

/// Suboptimal metric: treats the MMSE estimate as the true SNR.
RateChoice suboptimal_metric(double estimate, const LinkParams& p = LinkParams::standard());

/// Optimal metric: expected per-second success under f(gamma | estimate),
/// estimate in normalized scale.
RateChoice optimal_metric(double normalizedEstimate, CsiQuality q, double avgSnr,
                          const LinkParams& p = LinkParams::standard());

/// Average imperfect-CSI throughput with L-relay selection on the estimate.
/// `metric` is Optimal, Suboptimal or SuboptimalRealized.
ThroughputResult avg_imperfect_throughput(double avgSnr, int L, CsiQuality q, Method metric,
                                          const LinkParams& p = LinkParams::standard());

/// Rate decision of the optimal metric as a function of the MMSE estimate,
/// tabulated once for a fixed (q, avgSnr).
class OptimalDecisionTable {
public:
    OptimalDecisionTable(CsiQuality q, double avgSnr, const LinkParams& p = LinkParams::standard());
    phy::Rate decide(double estimate) const;

private:
    struct Switch {
        double at;
        phy::Rate rate;
    };
    phy::Rate first_;
    std::vector<Switch> switches_;
};

struct OracleQuery {
    double avgSnr = 1.0;
    int L = 1;
    CsiQuality q = CsiQuality::from_rho(1.0);
    Method method = Method::Ideal;
    phy::Rate fixedRate = phy::Rate::R1;
};

struct MonteCarloResult {
    double mean = 0.0;
    double standardError = 0.0;
    double ciLow = 0.0;
    double ciHigh = 0.0;
    std::int64_t trials = 0;
};

/// Samples correlated (true, estimated) channel pairs per relay, applies the
/// selection and rate decision on the estimate, and scores P_s(gamma)/D of
/// the chosen rate on the true SNR. Suboptimal scores the metric value on the
/// estimate instead, matching its definition.
MonteCarloResult monte_carlo_oracle(const OracleQuery& query, std::int64_t trials, std::uint64_t seed,
                                    const LinkParams& p = LinkParams::standard());

} // namespace rrsel::linkcalc
