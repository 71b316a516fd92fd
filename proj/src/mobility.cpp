// SPDX-License-Identifier: Apache-2.0

#include "rrsel/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace rrsel::mobility {

namespace {

Position random_point(Rng& rng, const RwpParams& p)
{
    const double x = uniform01(rng) * p.arenaWidth;
    const double y = uniform01(rng) * p.arenaHeight;
    return {x, y};
}

RwpState start_leg(Position from, double t0, Rng& rng, const RwpParams& p)
{
    RwpState s;
    s.from = from;
    s.to = random_point(rng, p);
    s.speed = p.minSpeed + uniform01(rng) * (p.vMax - p.minSpeed);
    s.phase = Phase::Moving;
    s.phaseStart = t0;
    s.phaseEnd = t0 + mac::distance(s.from, s.to) / s.speed;
    return s;
}

} // namespace

RwpState initial_state(Rng& rng, const RwpParams& p, double t0)
{
    const Position start = random_point(rng, p);
    if (p.is_static())
        return static_state(start);
    return start_leg(start, t0, rng, p);
}

RwpState static_state(Position at)
{
    RwpState s;
    s.from = s.to = at;
    s.phase = Phase::Paused;
    return s;
}

Position position_at(const RwpState& s, double t)
{
    if (s.phase == Phase::Paused || t <= s.phaseStart)
        return s.from;
    if (t >= s.phaseEnd)
        return s.to;
    const double f = (t - s.phaseStart) / (s.phaseEnd - s.phaseStart);
    return {s.from.x + f * (s.to.x - s.from.x), s.from.y + f * (s.to.y - s.from.y)};
}

Velocity velocity(const RwpState& s)
{
    if (s.phase != Phase::Moving)
        return {};
    const double d = mac::distance(s.from, s.to);
    if (d == 0.0)
        return {};
    return {s.speed * (s.to.x - s.from.x) / d, s.speed * (s.to.y - s.from.y) / d};
}

RwpState advance(const RwpState& s, Rng& rng, const RwpParams& p)
{
    if (p.is_static())
        return static_state(s.to);
    if (s.phase == Phase::Moving) {
        RwpState next;
        next.from = next.to = s.to;
        next.phase = Phase::Paused;
        next.phaseStart = s.phaseEnd;
        next.phaseEnd = s.phaseEnd + p.pauseS;
        return next;
    }
    return start_leg(s.to, s.phaseEnd, rng, p);
}

double relative_speed(Velocity a, Velocity b) { return std::hypot(a.vx - b.vx, a.vy - b.vy); }

} // namespace rrsel::mobility
