// SPDX-License-Identifier: Apache-2.0
//
// Discrete-event network simulator: random waypoint nodes, per-link Rayleigh
// fading, CSMA/CA with MRTS/CTS rate-and-relay selection and greedy
// geographic forwarding.

#pragma once

#include "rrsel/mac.hpp"
#include "rrsel/phy.hpp"
#include "rrsel/rng.hpp"
#include "rrsel/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace rrsel::sim {

/// Time-ordered event queue; ties are dispatched in scheduling order.
class EventQueue {
public:
    using Handler = std::function<void()>;

    /// Throws std::logic_error when `t` lies before the current time.
    void schedule(double t, Handler fn);

    /// Dispatches the next event; false when none is left.
    bool step();

    /// Dispatches every event with time <= end.
    void run_until(double end);

    double now() const { return now_; }
    std::uint64_t dispatched() const { return dispatched_; }
    std::size_t pending() const { return heap_.size(); }

private:
    struct Entry {
        double time;
        std::uint64_t seq;
        Handler fn;
    };
    static bool later(const Entry& a, const Entry& b)
    {
        return a.time > b.time || (a.time == b.time && a.seq > b.seq);
    }

    std::vector<Entry> heap_;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::uint64_t dispatched_ = 0;
};

/// One transmission with its received power at every node, fading frozen at
/// the frame start.
struct Emission {
    mac::NodeId sender = -1;
    double start = 0.0;
    double end = 0.0;
    std::vector<double> rxPowerW; // indexed by node
};

/// Power at `node` from emissions active at `t`, excluding the intended
/// transmitter and the node's own.
double interference_at(std::span<const Emission> active, mac::NodeId node, mac::NodeId intended, double t);

/// Bernoulli draw with probability packet_success_prob(rate, sinr, bits).
bool reception_decision(phy::Rate rate, double sinr, int bits, Rng& rng);

struct SimulatorOptions {
    /// Pins node i at fixedPositions[i] for the whole run when non-empty
    /// (must then hold nodeCount entries).
    std::vector<mac::Position> fixedPositions;
    /// Receives one line per transmission when the config enables tracing.
    std::ostream* trace = nullptr;
};

/// Runs one scenario to completion. Throws ConfigError on invalid input.
RunMetrics run(const ScenarioConfig& cfg, const SimulatorOptions& opt = {});

} // namespace rrsel::sim
