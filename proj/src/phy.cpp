// SPDX-License-Identifier: Apache-2.0

#include "rrsel/phy.hpp"

#include "rrsel/special.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

namespace rrsel::phy {

double bit_rate(Rate r)
{
    switch (r) {
    case Rate::R1: return 1e6;
    case Rate::R2: return 2e6;
    case Rate::R5_5: return 5.5e6;
    case Rate::R11: return 11e6;
    }
    throw std::invalid_argument("bit_rate: unknown rate");
}

std::string_view rate_name(Rate r)
{
    switch (r) {
    case Rate::R1: return "1";
    case Rate::R2: return "2";
    case Rate::R5_5: return "5.5";
    case Rate::R11: return "11";
    }
    return "?";
}

std::string_view frame_kind_name(FrameKind k)
{
    switch (k) {
    case FrameKind::Hello: return "HELLO";
    case FrameKind::Mrts: return "MRTS";
    case FrameKind::Cts: return "CTS";
    case FrameKind::Data: return "DATA";
    case FrameKind::Ack: return "ACK";
    }
    return "?";
}

FrameSpec data_frame(int payloadBytes) { return {FrameKind::Data, payloadBytes, 28, kPlcp}; }
FrameSpec ack_frame() { return {FrameKind::Ack, 0, 14, kPlcp}; }
// 14 B control header + position (16 B) + SINR report (8 B)
FrameSpec cts_frame() { return {FrameKind::Cts, 24, 14, kPlcp}; }
FrameSpec mrts_frame(int candidates) { return {FrameKind::Mrts, 24 + 6 * candidates, 14, kPlcp}; }
// node id, position, sequence
FrameSpec hello_frame() { return {FrameKind::Hello, 24, 28, kPlcp}; }

double airtime(const FrameSpec& f, Rate rate)
{
    return f.plcpSeconds + f.mpdu_bits() / bit_rate(rate);
}

double frame_duration(Rate rate, const FrameSpec& data)
{
    return airtime(data, rate) + kSifs + airtime(ack_frame(), Rate::R1);
}

int link_bits(const FrameSpec& data) { return data.mpdu_bits() + ack_frame().mpdu_bits(); }

namespace {

double per_bit_snr(double snr, Rate r) { return snr * kBasicRate / bit_rate(r); }

std::vector<std::complex<double>> cck_codeword(double p1, double p2, double p3, double p4)
{
    auto e = [](double phase) { return std::polar(1.0, phase); };
    return {e(p1 + p2 + p3 + p4), e(p1 + p3 + p4), e(p1 + p2 + p4), -e(p1 + p4),
            e(p1 + p2 + p3),      e(p1 + p3),      -e(p1 + p2),     e(p1)};
}

// Codewords sharing the first (differentially encoded) phase; the remaining
// bits select among these.
std::vector<DistanceTerm> build_spectrum(int bitsPerSymbol)
{
    const double h = std::numbers::pi / 2.0;
    std::vector<std::vector<std::complex<double>>> book;
    if (bitsPerSymbol == 4) {
        for (int d2 = 0; d2 < 2; ++d2)
            for (int d3 = 0; d3 < 2; ++d3)
                book.push_back(cck_codeword(0.0, d2 * std::numbers::pi + h, 0.0, d3 * std::numbers::pi));
    } else {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    book.push_back(cck_codeword(0.0, a * h, b * h, c * h));
    }
    std::map<long, double> counts; // squared distance in 1e-6 units -> count
    for (std::size_t i = 0; i < book.size(); ++i)
        for (std::size_t j = 0; j < book.size(); ++j) {
            if (i == j)
                continue;
            double d2 = 0.0;
            for (std::size_t c = 0; c < 8; ++c)
                d2 += std::norm(book[i][c] - book[j][c]);
            counts[std::lround(d2 * 1e6)] += 1.0;
        }
    std::vector<DistanceTerm> out;
    for (auto [key, n] : counts)
        out.push_back({key * 1e-6, n / static_cast<double>(book.size())});
    return out;
}

double dqpsk_per_bit(double gb)
{
    if (gb <= 0.0)
        return 0.5;
    const double a = std::sqrt(2.0 * gb * (1.0 - std::numbers::sqrt2 / 2.0));
    const double b = std::sqrt(2.0 * gb * (1.0 + std::numbers::sqrt2 / 2.0));
    // Past this point the value is below 1e-120 and cannot move [1-Pb]^N.
    if ((b - a) * (b - a) > 560.0)
        return 0.0;
    const double tail = 0.5 * special::bessel_i0e(a * b) * std::exp(-0.5 * (a - b) * (a - b));
    return std::clamp(special::marcum_q1(a, b) - tail, 0.0, 0.5);
}

// First dibit: DQPSK on the codeword phase using the whole symbol energy.
// Remaining k-2 bits: coherent union bound over the codewords sharing that
// phase, SER divided by the bits it carries.
double cck_ber(double snr, Rate r, int bitsPerSymbol)
{
    if (snr <= 0.0)
        return 0.5;
    const double es = bitsPerSymbol * per_bit_snr(snr, r);
    const double phase_bits = dqpsk_per_bit(0.5 * es);
    double ser = 0.0;
    for (const auto& t : cck_distance_spectrum(bitsPerSymbol))
        ser += t.multiplicity * special::gaussian_q(std::sqrt(es * t.squaredDistance / 16.0));
    const int inner = bitsPerSymbol - 2;
    const double inner_bits = std::min(0.5, ser / inner);
    return (2.0 * phase_bits + inner * inner_bits) / bitsPerSymbol;
}

} // namespace

const std::vector<DistanceTerm>& cck_distance_spectrum(int bitsPerSymbol)
{
    static const std::vector<DistanceTerm> four = build_spectrum(4);
    static const std::vector<DistanceTerm> eight = build_spectrum(8);
    if (bitsPerSymbol == 4)
        return four;
    if (bitsPerSymbol == 8)
        return eight;
    throw std::invalid_argument("cck_distance_spectrum: bits per symbol must be 4 or 8");
}

double ber_dbpsk(double snr) { return 0.5 * std::exp(-per_bit_snr(std::max(snr, 0.0), Rate::R1)); }

double ber_dqpsk(double snr) { return dqpsk_per_bit(std::max(snr, 0.0)); }

double ber_cck55(double snr) { return cck_ber(snr, Rate::R5_5, 4); }
double ber_cck11(double snr) { return cck_ber(snr, Rate::R11, 8); }

BerModel::BerModel() : fns_{ber_dbpsk, ber_dqpsk, ber_cck55, ber_cck11} {}

double BerModel::operator()(Rate rate, double snr) const { return fns_[index_of(rate)](snr); }

void BerModel::set(Rate rate, BerFunction fn) { fns_[index_of(rate)] = std::move(fn); }

const BerModel& BerModel::standard()
{
    static const BerModel model;
    return model;
}

double bit_error_prob(Rate rate, double snr)
{
    switch (rate) {
    case Rate::R1: return ber_dbpsk(snr);
    case Rate::R2: return ber_dqpsk(snr);
    case Rate::R5_5: return ber_cck55(snr);
    case Rate::R11: return ber_cck11(snr);
    }
    return 0.5;
}

double packet_success_prob(Rate rate, double snr, int nBits)
{
    const double pb = bit_error_prob(rate, snr);
    return std::exp(static_cast<double>(nBits) * std::log1p(-pb));
}

double packet_success_prob(const BerModel& model, Rate rate, double snr, int nBits)
{
    const double pb = model(rate, snr);
    return std::exp(static_cast<double>(nBits) * std::log1p(-pb));
}

} // namespace rrsel::phy
