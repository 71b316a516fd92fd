// SPDX-License-Identifier: Apache-2.0
//
// 802.11b DSSS/CCK physical layer: rate set, bit-error models, packet
// success probability and frame airtime accounting.
//
// SNR convention: `snr` is the received signal-to-noise ratio referred to the
// 1 Msym/s DSSS symbol, so the per-bit SNR at rate R is snr * (1 Mbps / R).

#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

namespace rrsel::phy {

enum class Rate { R1 = 0, R2 = 1, R5_5 = 2, R11 = 3 };

inline constexpr std::array<Rate, 4> kAllRates = {Rate::R1, Rate::R2, Rate::R5_5, Rate::R11};

constexpr std::size_t index_of(Rate r) { return static_cast<std::size_t>(r); }
double bit_rate(Rate r);
std::string_view rate_name(Rate r);

// 802.11b DSSS timing, long preamble.
inline constexpr double kSifs = 10e-6;
inline constexpr double kSlot = 20e-6;
inline constexpr double kDifs = 50e-6;
inline constexpr double kPlcp = 192e-6;
inline constexpr double kBasicRate = 1e6;

enum class FrameKind { Hello, Mrts, Cts, Data, Ack };
std::string_view frame_kind_name(FrameKind k);

struct FrameSpec {
    FrameKind kind = FrameKind::Data;
    int payloadBytes = 0;
    int macOverheadBytes = 0;
    double plcpSeconds = kPlcp;

    int mpdu_bits() const { return 8 * (payloadBytes + macOverheadBytes); }
};

// Frame layouts. DATA carries 256 B payload by default, CTS is 38 B so that
// its airtime at 1 Mbps is 496 symbols including the PLCP.
FrameSpec data_frame(int payloadBytes = 256);
FrameSpec ack_frame();
FrameSpec cts_frame();
FrameSpec mrts_frame(int candidates);
FrameSpec hello_frame();

/// Airtime of one frame: PLCP at 1 Mbps plus the MPDU at `rate`.
double airtime(const FrameSpec& f, Rate rate);

/// D_i: DATA at `rate`, SIFS, then the ACK at the basic rate.
double frame_duration(Rate rate, const FrameSpec& data);

/// N of the packet-success model: DATA MPDU bits plus ACK bits.
int link_bits(const FrameSpec& data);

using BerFunction = std::function<double(double snr)>;

/// Bit-error model registry, one entry per rate. Defaults:
///   R1   DBPSK:  Pb = exp(-gb)/2
///   R2   DQPSK:  Pb = Q1(a,b) - I0(ab) exp(-(a^2+b^2)/2) / 2
///   R5_5, R11 CCK: first dibit as DQPSK at the symbol energy; remaining bits
///                  from a Gaussian-Q union bound over the codewords sharing
///                  that phase, SER divided by the bits they carry.
class BerModel {
public:
    BerModel();
    double operator()(Rate rate, double snr) const;
    void set(Rate rate, BerFunction fn);
    static const BerModel& standard();

private:
    std::array<BerFunction, 4> fns_;
};

double ber_dbpsk(double snr);
double ber_dqpsk(double snr);
double ber_cck55(double snr);
double ber_cck11(double snr);

/// Bit error probability with the standard model.
double bit_error_prob(Rate rate, double snr);

/// [1 - Pb]^N evaluated as exp(N log1p(-Pb)).
double packet_success_prob(Rate rate, double snr, int nBits);
double packet_success_prob(const BerModel& model, Rate rate, double snr, int nBits);

/// Distinct squared chip distances and their average multiplicity among the
/// CCK codewords that share the first phase (4 or 8 bits per symbol).
struct DistanceTerm {
    double squaredDistance;
    double multiplicity;
};
const std::vector<DistanceTerm>& cck_distance_spectrum(int bitsPerSymbol);

} // namespace rrsel::phy
