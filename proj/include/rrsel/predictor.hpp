// SPDX-License-Identifier: Apache-2.0
//
// LMMSE prediction of the complex fading gain from noisy pilots carried in a
// CTS frame, and closed-form prediction / outdated-CSI error.

#pragma once

#include "rrsel/channel.hpp"
#include "rrsel/rng.hpp"

#include <map>
#include <span>
#include <tuple>
#include <vector>

namespace rrsel::predictor {

using channel::ComplexGain;

struct PredictorConfig {
    double pilotRateHz = 1e5;
    double pilotSnrDb = 30.0;
    int order = 50;
    double horizonSeconds = 0.0;

    double pilot_snr() const;
    /// Throws std::domain_error unless order >= 1, horizon >= 0 and the
    /// pilot rate exceeds twice the Doppler frequency.
    void validate(double fdHz) const;
};

/// Pilots of one CTS, oldest first, uniformly spaced at 1 / pilotRateHz.
struct PilotBlock {
    std::vector<ComplexGain> observations;
    std::vector<double> timestamps;
};

/// 50 pilots: a 496-symbol CTS with a pilot every 10 symbols.
inline constexpr int kCtsPilots = 50;

/// Wiener taps w = (R + I/snr)^{-1} r. Tap k multiplies the observation k
/// steps before the newest one.
std::vector<double> design_predictor(double fdHz, const PredictorConfig& cfg);

struct Prediction {
    ComplexGain gain;
    double snrEstimate = 0.0; // avgSnr * |gain|^2
};

Prediction predict_gain(const PilotBlock& block, std::span<const double> coeffs, double avgSnr);

/// NMSE of the predictor: 1 - r^T (R + I/snr)^{-1} r.
double analytic_mse(double fdHz, const PredictorConfig& cfg);

/// NMSE of a single outdated sample scaled by its correlation: 1 - J0^2.
double outdated_mse(double fdHz, double tauS);

/// Noisy pilots of `proc` with the newest pilot at `lastPilotTime`.
PilotBlock observe_pilots(const channel::FadingProcess& proc, double lastPilotTime, int count,
                          const PredictorConfig& cfg, Rng& rng);

/// Memoizes designs on (Doppler rounded to 0.1 Hz, horizon to 1 ns, order,
/// pilot rate, pilot SNR). Not thread-safe; one per simulation run.
class CoefficientCache {
public:
    const std::vector<double>& get(double fdHz, const PredictorConfig& cfg);
    std::size_t size() const { return cache_.size(); }
    static double quantize_doppler(double fdHz);

private:
    using Key = std::tuple<long, long, int, long, long>;
    std::map<Key, std::vector<double>> cache_;
};

} // namespace rrsel::predictor
