// SPDX-License-Identifier: Apache-2.0
//
// Greedy geographic forwarding: HELLO-driven neighbor table and selection of
// up to L next-hop candidates with positive progress.

#pragma once

#include "rrsel/linkcalc.hpp"
#include "rrsel/mac.hpp"

#include <map>
#include <vector>

namespace rrsel::gpsr {

using mac::NodeId;
using mac::Position;

struct GpsrParams {
    double helloIntervalS = 1.5;
    double emaAlpha = 0.3;
    int expiryIntervals = 3;

    double expiry() const { return helloIntervalS * expiryIntervals; }
};

struct NeighborEntry {
    NodeId nodeId = -1;
    Position position;
    double lastHeard = 0.0;
    double avgSinr = 0.0;
};

struct Hello {
    NodeId sender = -1;
    Position position;
};

class NeighborTable {
public:
    explicit NeighborTable(GpsrParams p = {}) : params_(p) {}

    /// Upserts the sender; the SINR average is seeded with the first
    /// measurement and then updated as (1 - a) avg + a measured.
    void process_hello(const Hello& hello, double measuredSinr, double now);

    /// Entries heard within the expiry window at `now`.
    std::vector<NeighborEntry> live(double now) const;

    /// Drops expired entries.
    void purge(double now);

    const NeighborEntry* find(NodeId id) const;
    std::size_t size() const { return entries_.size(); }
    const GpsrParams& params() const { return params_; }

private:
    GpsrParams params_;
    std::map<NodeId, NeighborEntry> entries_;
};

/// Z = |self - dest| - |neighbor - dest|.
double progress(Position self, Position neighbor, Position dest);

/// Up to L live neighbors with Z > 0, ranked by Z * max_i P_s,i(avgSinr)/D_i,
/// ties by node id. Candidate SNR estimates start at the HELLO average. An
/// empty result means the packet sits at a local maximum.
std::vector<mac::RelayCandidate> candidate_list(const NeighborTable& table, Position self, Position dest,
                                                int L, double now,
                                                const linkcalc::LinkParams& p = linkcalc::LinkParams::standard());

} // namespace rrsel::gpsr
