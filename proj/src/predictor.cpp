// SPDX-License-Identifier: Apache-2.0

#include "rrsel/predictor.hpp"

#include "rrsel/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rrsel::predictor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct System {
    Eigen::MatrixXd lhs;
    Eigen::VectorXd rhs;
};

System normal_equations(double fd, const PredictorConfig& cfg)
{
    const int p = cfg.order;
    const double dt = 1.0 / cfg.pilotRateHz;
    Eigen::VectorXd lag(p);
    for (int k = 0; k < p; ++k)
        lag(k) = special::bessel_j0(kTwoPi * fd * k * dt);
    System s{Eigen::MatrixXd(p, p), Eigen::VectorXd(p)};
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
            s.lhs(j, k) = lag(std::abs(j - k));
    s.lhs.diagonal().array() += 1.0 / cfg.pilot_snr();
    for (int k = 0; k < p; ++k)
        s.rhs(k) = special::bessel_j0(kTwoPi * fd * (cfg.horizonSeconds + k * dt));
    return s;
}

} // namespace

double PredictorConfig::pilot_snr() const { return std::pow(10.0, pilotSnrDb / 10.0); }

void PredictorConfig::validate(double fdHz) const
{
    if (fdHz < 0.0)
        throw std::domain_error("predictor: negative Doppler");
    if (order < 1)
        throw std::domain_error("predictor: order must be at least 1");
    if (horizonSeconds < 0.0)
        throw std::domain_error("predictor: negative horizon");
    if (!(pilotRateHz > 2.0 * fdHz))
        throw std::domain_error("predictor: pilot rate must exceed twice the Doppler frequency");
    if (!std::isfinite(pilotSnrDb))
        throw std::domain_error("predictor: pilot SNR must be finite");
}

std::vector<double> design_predictor(double fdHz, const PredictorConfig& cfg)
{
    cfg.validate(fdHz);
    const auto sys = normal_equations(fdHz, cfg);
    const Eigen::VectorXd w = sys.lhs.ldlt().solve(sys.rhs);
    return {w.data(), w.data() + w.size()};
}

Prediction predict_gain(const PilotBlock& block, std::span<const double> coeffs, double avgSnr)
{
    const auto& y = block.observations;
    if (y.size() < coeffs.size())
        throw std::invalid_argument("predict_gain: fewer observations than taps");
    ComplexGain h{};
    const std::size_t last = y.size() - 1;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        h += coeffs[k] * y[last - k];
    return {h, avgSnr * std::norm(h)};
}

double analytic_mse(double fdHz, const PredictorConfig& cfg)
{
    cfg.validate(fdHz);
    const auto sys = normal_equations(fdHz, cfg);
    const Eigen::VectorXd w = sys.lhs.ldlt().solve(sys.rhs);
    return std::clamp(1.0 - sys.rhs.dot(w), 0.0, 1.0);
}

double outdated_mse(double fdHz, double tauS)
{
    if (fdHz < 0.0 || tauS < 0.0)
        throw std::domain_error("outdated_mse: arguments must be non-negative");
    const double rho = special::bessel_j0(kTwoPi * fdHz * tauS);
    return 1.0 - rho * rho;
}

PilotBlock observe_pilots(const channel::FadingProcess& proc, double lastPilotTime, int count,
                          const PredictorConfig& cfg, Rng& rng)
{
    PilotBlock b;
    const double sigma = std::sqrt(0.5 / cfg.pilot_snr());
    std::normal_distribution<double> noise(0.0, sigma);
    const double dt = 1.0 / cfg.pilotRateHz;
    for (int k = count - 1; k >= 0; --k) {
        const double t = lastPilotTime - k * dt;
        b.timestamps.push_back(t);
        const double re = noise(rng);
        const double im = noise(rng);
        b.observations.push_back(proc.sample(t) + ComplexGain(re, im));
    }
    return b;
}

double CoefficientCache::quantize_doppler(double fdHz) { return std::round(fdHz * 10.0) / 10.0; }

const std::vector<double>& CoefficientCache::get(double fdHz, const PredictorConfig& cfg)
{
    const double fd = quantize_doppler(fdHz);
    const Key key{std::lround(fd * 10.0), std::llround(cfg.horizonSeconds * 1e9), cfg.order,
                  std::lround(cfg.pilotRateHz), std::lround(cfg.pilotSnrDb * 1000.0)};
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, design_predictor(fd, cfg)).first;
    return it->second;
}

} // namespace rrsel::predictor
