// SPDX-License-Identifier: Apache-2.0

#include "rrsel/channel.hpp"
#include "rrsel/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rrsel;
using namespace rrsel::channel;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("zero Doppler freezes the channel")
{
    FadingProcess p(0.0, 11);
    const auto h0 = p.sample(0.0);
    CHECK(p.sample(3.7) == h0);
    CHECK(p.sample(1234.5) == h0);
}

TEST_CASE("samples are a pure function of seed and time")
{
    FadingProcess a(80.0, 5), b(80.0, 5), c(80.0, 6);
    CHECK(a.sample(5.0) == b.sample(5.0));
    CHECK(a.sample(5.0) != c.sample(5.0));
    const auto late = a.sample(9.0);
    a.sample(1.0);
    CHECK(a.sample(9.0) == late);
    CHECK_THROWS_AS(sample_gain(a, -1.0), std::domain_error);
    CHECK_THROWS_AS(FadingProcess(-1.0, 1), std::domain_error);
}

TEST_CASE("unit average power over a long record")
{
    FadingProcess p(100.0, 21);
    double s = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k)
        s += std::norm(p.sample(k * 1e-4));
    CHECK(s / n >= 0.98);
    CHECK(s / n <= 1.02);
}

TEST_CASE("independent links are uncorrelated")
{
    FadingProcess a(50.0, 1), b(50.0, 2);
    std::complex<double> cross{};
    double pa = 0.0, pb = 0.0;
    for (int k = 0; k < 200000; ++k) {
        const auto x = a.sample(k * 1e-3), y = b.sample(k * 1e-3);
        cross += x * std::conj(y);
        pa += std::norm(x);
        pb += std::norm(y);
    }
    CHECK(std::abs(cross) / std::sqrt(pa * pb) < 0.05);
}

TEST_CASE("retune keeps the gain continuous")
{
    FadingProcess p(30.0, 4);
    const double t0 = 2.5;
    const auto before = p.sample(t0);
    p.retune(180.0, t0);
    CHECK(std::abs(p.sample(t0) - before) < 1e-9);
    CHECK(p.doppler_hz() == 180.0);
    // The new Doppler governs the oscillator frequencies.
    for (const auto& o : p.in_phase())
        CHECK(std::abs(o.frequencyHz) <= 180.0 + 1e-9);
}

TEST_CASE("path loss")
{
    PathLossParams p;
    const double rx300 = watt_to_dbm(p.txPowerW * path_gain(300.0, p));
    CHECK_THAT(rx300, WithinAbs(-93.0, 1.5));
    CHECK_THAT(rx300, WithinAbs(-92.0412, 1e-3));

    const double dc = p.crossover_distance();
    CHECK_THAT(dc, WithinRel(226.35126237, 1e-8));
    CHECK(std::abs(linear_to_db(friis_gain(dc, p) / two_ray_gain(dc, p))) < 0.5);
    CHECK_THAT(path_gain(600.0, p) / path_gain(300.0, p), WithinRel(1.0 / 16.0, 1e-14));

    double prev = path_gain(1.0, p);
    for (double d = 2.0; d < 2000.0; d += 3.0) {
        CHECK(path_gain(d, p) <= prev);
        prev = path_gain(d, p);
    }
    CHECK_THROWS_AS(path_gain(0.0, p), std::domain_error);
    CHECK_THROWS_AS(path_gain(-5.0, p), std::domain_error);
}

TEST_CASE("SNR with and without interference")
{
    PathLossParams p;
    const double g = path_gain(150.0, p);
    const auto clean = instantaneous_sinr(g, {1.0, 0.0}, p, 0.0);
    CHECK_THAT(clean.value, WithinRel(clean.avg, 1e-15));
    const auto hit = instantaneous_sinr(g, {1.0, 0.0}, p, p.noiseW);
    CHECK_THAT(hit.value, WithinRel(0.5 * clean.value, 1e-15));

    // 1 mW, 100 m (Friis branch), |h|^2 = 0.5, -102 dBm noise.
    const auto s = instantaneous_sinr(path_gain(100.0, p), {0.5, 0.5}, p, 0.0);
    CHECK_THAT(s.value, WithinRel(78.30134078603037, 1e-9));
    CHECK_THROWS_AS(instantaneous_sinr(g, {1.0, 0.0}, p, -1.0), std::domain_error);
}

TEST_CASE("Clarke autocorrelation and Doppler")
{
    CHECK(jakes_autocorr(100.0, 0.0) == 1.0);
    CHECK_THAT(jakes_autocorr(1.0, 2.404825557695773 / (2.0 * std::numbers::pi)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(jakes_autocorr(100.0, 1e-3), WithinAbs(0.9037, 1e-4));
    CHECK_THAT(doppler_from_speed(20.0, 2.4e9), WithinRel(160.1108, 1e-6));
    CHECK_THAT(dbm_to_watt(-102.0), WithinRel(6.309573444801929e-14, 1e-14));
}
