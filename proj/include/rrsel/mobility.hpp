// SPDX-License-Identifier: Apache-2.0
//
// Random waypoint mobility in a rectangular arena.

#pragma once

#include "rrsel/mac.hpp"
#include "rrsel/rng.hpp"

#include <limits>

namespace rrsel::mobility {

using mac::Position;

struct RwpParams {
    double vMax = 20.0;
    double pauseS = 2.0;
    double minSpeed = 0.01; // speeds are drawn on [minSpeed, vMax]
    double arenaWidth = 500.0;
    double arenaHeight = 500.0;

    /// vMax at or below minSpeed leaves every node where it starts.
    bool is_static() const { return vMax <= minSpeed; }
};

enum class Phase { Moving, Paused };

struct RwpState {
    Position from;
    Position to;
    double speed = 0.0;
    Phase phase = Phase::Paused;
    double phaseStart = 0.0;
    double phaseEnd = std::numeric_limits<double>::infinity();
};

struct Velocity {
    double vx = 0.0;
    double vy = 0.0;
};

/// Uniform random start position; the node departs at t0 toward its first
/// waypoint (or stays put forever when the model is static).
RwpState initial_state(Rng& rng, const RwpParams& p, double t0 = 0.0);

/// Fixed position for the whole run.
RwpState static_state(Position at);

/// Linear interpolation while moving, fixed while paused. Times outside the
/// phase are clamped to its ends.
Position position_at(const RwpState& s, double t);

Velocity velocity(const RwpState& s);

/// Next phase: MOVING -> PAUSED for the pause time, PAUSED -> MOVING toward a
/// uniform waypoint at a uniform speed.
RwpState advance(const RwpState& s, Rng& rng, const RwpParams& p);

double relative_speed(Velocity a, Velocity b);

} // namespace rrsel::mobility
