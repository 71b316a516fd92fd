// SPDX-License-Identifier: Apache-2.0
//
// MRTS/CTS multi-candidate exchange: timing, CSI age per acquisition scheme,
// joint rate-and-relay selection and DCF backoff.

#pragma once

#include "rrsel/linkcalc.hpp"
#include "rrsel/phy.hpp"
#include "rrsel/rng.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rrsel::mac {

using NodeId = int;

enum class CsiScheme { RtsCsi, CtsCsi, Ideal };
std::string_view scheme_name(CsiScheme s);
std::optional<CsiScheme> parse_scheme(std::string_view s);

struct MacTiming {
    double sifs = phy::kSifs;
    double slot = phy::kSlot;
    double difs = phy::kDifs;
    double ctsAirtime = 0.0;
    double mrtsAirtime = 0.0;

    /// 802.11b values with CTS and MRTS airtime at 1 Mbps for L candidates.
    static MacTiming standard(int L);
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};
double distance(Position a, Position b);

struct RelayCandidate {
    NodeId nodeId = -1;
    Position position;
    double progress = 0.0;      // Z_l, metres
    double snrEstimate = 0.0;   // linear
    double csiAgeSeconds = 0.0;
};

/// Delay from the end of the l-th CTS (1-based) to the start of DATA:
/// (L - l)(SIFS + T_CTS) + SIFS.
double cts_delay(int L, int l, const MacTiming& t);

/// Age of a candidate's MRTS-time SINR report at DATA start:
/// L (SIFS + T_CTS) + SIFS.
double rts_csi_age(int L, const MacTiming& t);

struct Selection {
    NodeId nodeId = -1;
    phy::Rate rate = phy::Rate::R1;
    double metric = 0.0;
    std::size_t index = 0; // position in the candidate list
};

class NoCandidate : public std::runtime_error {
public:
    NoCandidate() : std::runtime_error("select_rate_relay: no candidates") {}
};

/// argmax over (l, i) of Z_l P_s,i(snrEstimate_l) / D_i; ties go to the lower
/// node id, then the lower rate.
Selection select_rate_relay(std::span<const RelayCandidate> cands,
                            const linkcalc::LinkParams& p = linkcalc::LinkParams::standard());

/// Binary exponential backoff state.
class Backoff {
public:
    static constexpr int kCwMin = 31;
    static constexpr int kCwMax = 1023;

    int cw() const { return cw_; }
    /// Uniform slot count on [0, CW].
    int draw(Rng& rng) const;
    void on_failure() { cw_ = std::min(2 * cw_ + 1, kCwMax); }
    void on_success() { cw_ = kCwMin; }

private:
    int cw_ = kCwMin;
};

struct BackoffSchedule {
    double difs = 0.0;
    int slots = 0;
    double slot = 0.0;
    double total() const { return difs + slots * slot; }
};

/// DIFS plus a fresh backoff draw for a node that found the medium idle.
BackoffSchedule dcf_contend(const Backoff& state, Rng& rng, const MacTiming& t);

/// Timeline of one MRTS/CTS/DATA/ACK exchange starting at `start`, with the
/// CSI age each candidate's estimate will have when DATA begins.
struct ExchangeTimeline {
    double mrtsStart = 0.0;
    double mrtsEnd = 0.0;
    std::vector<double> ctsStart; // slot l at index l-1
    std::vector<double> ctsEnd;
    std::vector<double> csiAge;   // per slot, under the requested scheme
    double dataStart = 0.0;
    double dataEnd = 0.0;
    double ackStart = 0.0;
    double ackEnd = 0.0;
};

ExchangeTimeline plan_exchange(double start, int L, CsiScheme scheme, phy::Rate dataRate,
                               const phy::FrameSpec& data, const MacTiming& t);

/// NAV carried in the MRTS: from MRTS end through every CTS slot, DATA at the
/// basic rate and its ACK.
double mrts_nav(int L, const phy::FrameSpec& data, const MacTiming& t);

} // namespace rrsel::mac
