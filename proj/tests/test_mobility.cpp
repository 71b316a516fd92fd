// SPDX-License-Identifier: Apache-2.0

#include "rrsel/mobility.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rrsel;
using namespace rrsel::mobility;
using Catch::Matchers::WithinAbs;

TEST_CASE("nodes stay inside the arena")
{
    RwpParams p;
    p.arenaWidth = 400;
    p.arenaHeight = 300;
    Rng rng(3);
    auto s = initial_state(rng, p);
    for (int leg = 0; leg < 400; ++leg) {
        for (int k = 0; k <= 10; ++k) {
            const double t = s.phaseStart + k * (s.phaseEnd - s.phaseStart) / 10.0;
            const auto x = position_at(s, t);
            CHECK(x.x >= 0.0);
            CHECK(x.x <= 400.0);
            CHECK(x.y >= 0.0);
            CHECK(x.y <= 300.0);
        }
        if (s.phase == Phase::Moving) {
            CHECK(s.speed >= p.minSpeed);
            CHECK(s.speed <= p.vMax);
            CHECK_THAT(std::hypot(velocity(s).vx, velocity(s).vy), WithinAbs(s.speed, 1e-9));
        } else {
            CHECK_THAT(s.phaseEnd - s.phaseStart, WithinAbs(p.pauseS, 1e-12));
        }
        const auto next = advance(s, rng, p);
        CHECK(next.phaseStart == s.phaseEnd);
        CHECK(position_at(next, next.phaseStart).x == s.to.x);
        s = next;
    }
}

TEST_CASE("interpolation")
{
    RwpState s;
    s.from = {0, 0};
    s.to = {100, 50};
    s.speed = 10;
    s.phase = Phase::Moving;
    s.phaseStart = 2.0;
    s.phaseEnd = 2.0 + std::hypot(100.0, 50.0) / 10.0;
    const auto mid = position_at(s, 0.5 * (s.phaseStart + s.phaseEnd));
    CHECK_THAT(mid.x, WithinAbs(50.0, 1e-9));
    CHECK_THAT(mid.y, WithinAbs(25.0, 1e-9));
    CHECK(position_at(s, 0.0).x == 0.0);
    CHECK(position_at(s, 1e9).x == 100.0);
    CHECK_THAT(relative_speed(velocity(s), velocity(s)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("trajectories replay from the seed")
{
    RwpParams p;
    Rng a(8), b(8);
    auto sa = initial_state(a, p), sb = initial_state(b, p);
    for (int k = 0; k < 50; ++k) {
        CHECK(sa.to.x == sb.to.x);
        CHECK(sa.phaseEnd == sb.phaseEnd);
        sa = advance(sa, a, p);
        sb = advance(sb, b, p);
    }
}

TEST_CASE("static model")
{
    RwpParams p;
    p.vMax = 0.0;
    Rng rng(1);
    const auto s = initial_state(rng, p);
    CHECK(std::isinf(s.phaseEnd));
    const auto x = position_at(s, 1e6);
    CHECK(x.x == s.from.x);
    CHECK(velocity(s).vx == 0.0);
    const auto n = advance(s, rng, p);
    CHECK(position_at(n, 5.0).y == s.from.y);
}
