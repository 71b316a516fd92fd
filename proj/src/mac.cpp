// SPDX-License-Identifier: Apache-2.0

#include "rrsel/mac.hpp"

#include <cmath>
#include <stdexcept>

namespace rrsel::mac {

std::string_view scheme_name(CsiScheme s)
{
    switch (s) {
    case CsiScheme::RtsCsi: return "RTS";
    case CsiScheme::CtsCsi: return "CTS";
    case CsiScheme::Ideal: return "IDEAL";
    }
    return "?";
}

std::optional<CsiScheme> parse_scheme(std::string_view s)
{
    if (s == "RTS" || s == "rts" || s == "RTS_CSI")
        return CsiScheme::RtsCsi;
    if (s == "CTS" || s == "cts" || s == "CTS_CSI")
        return CsiScheme::CtsCsi;
    if (s == "IDEAL" || s == "ideal")
        return CsiScheme::Ideal;
    return std::nullopt;
}

MacTiming MacTiming::standard(int L)
{
    MacTiming t;
    t.ctsAirtime = phy::airtime(phy::cts_frame(), phy::Rate::R1);
    t.mrtsAirtime = phy::airtime(phy::mrts_frame(L), phy::Rate::R1);
    return t;
}

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double cts_delay(int L, int l, const MacTiming& t)
{
    if (l < 1 || l > L)
        throw std::domain_error("cts_delay: candidate index out of range");
    return (L - l) * (t.sifs + t.ctsAirtime) + t.sifs;
}

double rts_csi_age(int L, const MacTiming& t)
{
    if (L < 1)
        throw std::domain_error("rts_csi_age: need at least one candidate");
    return L * (t.sifs + t.ctsAirtime) + t.sifs;
}

Selection select_rate_relay(std::span<const RelayCandidate> cands, const linkcalc::LinkParams& p)
{
    if (cands.empty())
        throw NoCandidate();
    std::optional<Selection> best;
    for (std::size_t l = 0; l < cands.size(); ++l) {
        const auto& c = cands[l];
        for (phy::Rate r : phy::kAllRates) {
            const double m = c.progress * p.per_second(r, c.snrEstimate);
            bool better = !best || m > best->metric;
            if (best && m == best->metric)
                better = c.nodeId < best->nodeId ||
                         (c.nodeId == best->nodeId && phy::index_of(r) < phy::index_of(best->rate));
            if (better)
                best = Selection{c.nodeId, r, m, l};
        }
    }
    return *best;
}

int Backoff::draw(Rng& rng) const
{
    return static_cast<int>(rng() % static_cast<std::uint64_t>(cw_ + 1));
}

BackoffSchedule dcf_contend(const Backoff& state, Rng& rng, const MacTiming& t)
{
    return {t.difs, state.draw(rng), t.slot};
}

ExchangeTimeline plan_exchange(double start, int L, CsiScheme scheme, phy::Rate dataRate,
                               const phy::FrameSpec& data, const MacTiming& t)
{
    if (L < 1)
        throw std::domain_error("plan_exchange: need at least one candidate");
    ExchangeTimeline x;
    double now = start;
    if (scheme != CsiScheme::Ideal) {
        x.mrtsStart = now;
        x.mrtsEnd = now + t.mrtsAirtime;
        now = x.mrtsEnd;
        for (int l = 1; l <= L; ++l) {
            x.ctsStart.push_back(now + t.sifs);
            x.ctsEnd.push_back(x.ctsStart.back() + t.ctsAirtime);
            now = x.ctsEnd.back();
            x.csiAge.push_back(scheme == CsiScheme::CtsCsi ? cts_delay(L, l, t) : rts_csi_age(L, t));
        }
        now += t.sifs;
    } else {
        x.mrtsStart = x.mrtsEnd = now;
        x.csiAge.assign(static_cast<std::size_t>(L), 0.0);
    }
    x.dataStart = now;
    x.dataEnd = now + phy::airtime(data, dataRate);
    x.ackStart = x.dataEnd + t.sifs;
    x.ackEnd = x.ackStart + phy::airtime(phy::ack_frame(), phy::Rate::R1);
    return x;
}

double mrts_nav(int L, const phy::FrameSpec& data, const MacTiming& t)
{
    return L * (t.sifs + t.ctsAirtime) + t.sifs + phy::airtime(data, phy::Rate::R1) + t.sifs +
           phy::airtime(phy::ack_frame(), phy::Rate::R1);
}

} // namespace rrsel::mac
