// SPDX-License-Identifier: Apache-2.0

#include "rrsel/channel.hpp"

#include "rrsel/rng.hpp"
#include "rrsel/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rrsel::channel {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

FadingProcess::FadingProcess(double dopplerHz, std::uint64_t seed, int oscillators)
    : dopplerHz_(dopplerHz), seed_(seed)
{
    if (dopplerHz < 0.0)
        throw std::domain_error("FadingProcess: negative Doppler");
    if (oscillators < 1)
        throw std::domain_error("FadingProcess: need at least one oscillator");
    Rng rng = make_stream(seed, "channel.fading");
    const int m = oscillators;
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    auto uniform_phase = [&] { return kTwoPi * uniform01(rng) - std::numbers::pi; };
    for (int n = 1; n <= m; ++n) {
        const double theta = uniform_phase();
        const double alpha = (kTwoPi * n - std::numbers::pi + theta) / (4.0 * m);
        cosAlpha_.push_back(std::cos(alpha));
        sinAlpha_.push_back(std::sin(alpha));
        inPhase_.push_back({amp, dopplerHz * cosAlpha_.back(), uniform_phase()});
        quadrature_.push_back({amp, dopplerHz * sinAlpha_.back(), uniform_phase()});
    }
}

ComplexGain FadingProcess::sample(double t) const
{
    double re = 0.0, im = 0.0;
    for (const auto& o : inPhase_)
        re += o.amplitude * std::cos(kTwoPi * o.frequencyHz * t + o.phase);
    for (const auto& o : quadrature_)
        im += o.amplitude * std::cos(kTwoPi * o.frequencyHz * t + o.phase);
    return {re, im};
}

void FadingProcess::retune(double dopplerHz, double t0)
{
    if (dopplerHz < 0.0)
        throw std::domain_error("FadingProcess::retune: negative Doppler");
    for (std::size_t n = 0; n < inPhase_.size(); ++n) {
        auto shift = [&](Oscillator& o, double factor) {
            const double f_new = dopplerHz * factor;
            o.phase = std::remainder(o.phase + kTwoPi * (o.frequencyHz - f_new) * t0, kTwoPi);
            o.frequencyHz = f_new;
        };
        shift(inPhase_[n], cosAlpha_[n]);
        shift(quadrature_[n], sinAlpha_[n]);
    }
    dopplerHz_ = dopplerHz;
}

ComplexGain sample_gain(const FadingProcess& proc, double t)
{
    if (t < 0.0)
        throw std::domain_error("sample_gain: negative time");
    return proc.sample(t);
}

void PathLossParams::validate() const
{
    if (!(txPowerW > 0.0 && antennaHeightM > 0.0 && antennaGain > 0.0 && carrierHz > 0.0 && noiseW > 0.0))
        throw std::domain_error("PathLossParams: all parameters must be positive");
}

double PathLossParams::crossover_distance() const
{
    return 4.0 * std::numbers::pi * antennaHeightM * antennaHeightM / wavelength();
}

double friis_gain(double d, const PathLossParams& p)
{
    const double x = p.wavelength() / (4.0 * std::numbers::pi * d);
    return p.antennaGain * p.antennaGain * x * x;
}

double two_ray_gain(double d, const PathLossParams& p)
{
    const double hh = p.antennaHeightM * p.antennaHeightM;
    return p.antennaGain * p.antennaGain * hh * hh / (d * d * d * d);
}

double path_gain(double d, const PathLossParams& p)
{
    if (!(d > 0.0))
        throw std::domain_error("path_gain: distance must be positive");
    return d < p.crossover_distance() ? friis_gain(d, p) : two_ray_gain(d, p);
}

LinkSnr instantaneous_sinr(double pathGain, ComplexGain h, const PathLossParams& p, double interferenceW)
{
    if (interferenceW < 0.0)
        throw std::domain_error("instantaneous_sinr: negative interference");
    const double denom = p.noiseW + interferenceW;
    const double avg = p.txPowerW * pathGain / denom;
    return {avg * std::norm(h), avg};
}

double jakes_autocorr(double fdHz, double tauS)
{
    if (fdHz < 0.0 || tauS < 0.0)
        throw std::domain_error("jakes_autocorr: arguments must be non-negative");
    return special::bessel_j0(kTwoPi * fdHz * tauS);
}

double doppler_from_speed(double relativeSpeedMps, double carrierHz)
{
    return std::abs(relativeSpeedMps) * carrierHz / kSpeedOfLight;
}

} // namespace rrsel::channel
