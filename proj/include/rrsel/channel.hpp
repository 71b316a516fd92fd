// SPDX-License-Identifier: Apache-2.0
//
// Flat Rayleigh fading (sum of sinusoids, Clarke spectrum), two-ray ground
// path loss and SNR/SINR conversion.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace rrsel::channel {

using ComplexGain = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr int kDefaultOscillators = 16;

double dbm_to_watt(double dbm);
double watt_to_dbm(double w);
double db_to_linear(double db);
double linear_to_db(double v);

/// Unit-power complex fading gain h(t), evaluated lazily at any t >= 0.
///
/// Each quadrature is a sum of M sinusoids at f_d cos(alpha_n) (in-phase) and
/// f_d sin(alpha_n) (quadrature) with alpha_n = (2 pi n - pi + theta_n) / 4M
/// and random phases, so that the ensemble autocorrelation is J0(2 pi f_d tau).
class FadingProcess {
public:
    struct Oscillator {
        double amplitude;
        double frequencyHz;
        double phase;
    };

    FadingProcess(double dopplerHz, std::uint64_t seed, int oscillators = kDefaultOscillators);

    ComplexGain sample(double t) const;

    /// Changes the Doppler frequency at time t0 while keeping h(t) continuous
    /// at t0.
    void retune(double dopplerHz, double t0);

    double doppler_hz() const { return dopplerHz_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Oscillator>& in_phase() const { return inPhase_; }
    const std::vector<Oscillator>& quadrature() const { return quadrature_; }

private:
    double dopplerHz_;
    std::uint64_t seed_;
    std::vector<double> cosAlpha_;
    std::vector<double> sinAlpha_;
    std::vector<Oscillator> inPhase_;
    std::vector<Oscillator> quadrature_;
};

ComplexGain sample_gain(const FadingProcess& proc, double t);

struct PathLossParams {
    double txPowerW = 1e-3;
    double antennaHeightM = 1.5;
    double antennaGain = 1.0;
    double carrierHz = 2.4e9;
    double noiseW = 6.309573444801929e-14; // -102 dBm

    void validate() const;
    double wavelength() const { return kSpeedOfLight / carrierHz; }
    /// 4 pi h_t h_r / lambda
    double crossover_distance() const;
};

/// Large-scale power gain: Friis below the crossover distance, two-ray ground
/// reflection (d^-4) at and beyond it.
double path_gain(double distanceM, const PathLossParams& p);
double friis_gain(double distanceM, const PathLossParams& p);
double two_ray_gain(double distanceM, const PathLossParams& p);

struct LinkSnr {
    double value = 0.0; // instantaneous, linear
    double avg = 0.0;   // large-scale average, linear
};

LinkSnr instantaneous_sinr(double pathGain, ComplexGain h, const PathLossParams& p, double interferenceW);

/// Clarke autocorrelation J0(2 pi f_d tau).
double jakes_autocorr(double fdHz, double tauS);

/// Maximum Doppler shift for a relative speed.
double doppler_from_speed(double relativeSpeedMps, double carrierHz);

} // namespace rrsel::channel
