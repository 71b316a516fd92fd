// SPDX-License-Identifier: Apache-2.0

#include "rrsel/gpsr.hpp"

#include <algorithm>
#include <stdexcept>

namespace rrsel::gpsr {

void NeighborTable::process_hello(const Hello& hello, double measuredSinr, double now)
{
    auto [it, inserted] = entries_.try_emplace(hello.sender);
    auto& e = it->second;
    e.nodeId = hello.sender;
    e.position = hello.position;
    e.lastHeard = now;
    e.avgSinr = inserted ? measuredSinr
                         : (1.0 - params_.emaAlpha) * e.avgSinr + params_.emaAlpha * measuredSinr;
}

std::vector<NeighborEntry> NeighborTable::live(double now) const
{
    std::vector<NeighborEntry> out;
    for (const auto& [id, e] : entries_)
        if (now - e.lastHeard <= params_.expiry())
            out.push_back(e);
    return out;
}

void NeighborTable::purge(double now)
{
    std::erase_if(entries_, [&](const auto& kv) { return now - kv.second.lastHeard > params_.expiry(); });
}

const NeighborEntry* NeighborTable::find(NodeId id) const
{
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

double progress(Position self, Position neighbor, Position dest)
{
    return mac::distance(self, dest) - mac::distance(neighbor, dest);
}

std::vector<mac::RelayCandidate> candidate_list(const NeighborTable& table, Position self, Position dest, int L,
                                                double now, const linkcalc::LinkParams& p)
{
    if (L < 1)
        throw std::domain_error("candidate_list: L must be at least 1");
    struct Ranked {
        double score;
        mac::RelayCandidate cand;
    };
    std::vector<Ranked> ranked;
    for (const auto& e : table.live(now)) {
        const double z = progress(self, e.position, dest);
        if (!(z > 0.0))
            continue;
        const double score = z * linkcalc::suboptimal_metric(e.avgSinr, p).packetsPerSecond;
        ranked.push_back({score, {e.nodeId, e.position, z, e.avgSinr, now - e.lastHeard}});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.cand.nodeId < b.cand.nodeId;
    });
    std::vector<mac::RelayCandidate> out;
    for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < L; ++i)
        out.push_back(ranked[i].cand);
    return out;
}

} // namespace rrsel::gpsr
