#include <gtest/gtest.h>

#include <random>

#include "bearing_game/engine.hpp"
#include "bearing_game/kinematics.hpp"
#include "oracles.hpp"

using namespace bearing_game;

TEST(PlanarState, PolarRoundTrip) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> r(1e-3, 1e3), th(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double rr = r(rng), tt = th(rng);
    const auto s = PlanarState::fromPolar(rr, tt);
    EXPECT_NEAR(s.range(), rr, 1e-12 * rr);
    EXPECT_NEAR(s.bearing(), tt, 1e-12);
  }
}

TEST(PlanarDerivatives, HeadOnClosing) {
  EXPECT_DOUBLE_EQ(planarDerivatives({0.0, 3.0}, 0.0, kPi, 0.5).rDot, -1.5);
}

TEST(PlanarDerivatives, EqualSpeedTailChase) {
  EXPECT_NEAR(planarDerivatives({0.0, 3.0}, 0.0, 0.0, 1.0).rDot, 0.0, 1e-15);
}

TEST(PlanarDerivatives, ZeroRangeThrows) {
  EXPECT_THROW(planarDerivatives({0.0, 0.0}, 0.0, 0.0, 1.0), ZeroRange);
}

TEST(PlanarDerivatives, PolarMatchesCartesianChainRule) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(-kPi, kPi), sp(0.0, 3.0), r(0.1, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const auto s = PlanarState::fromPolar(r(rng), ang(rng));
    const double ua = u(rng), uh = ang(rng), vh = sp(rng);
    const auto d = planarDerivatives(s, ua, uh, vh);
    // numeric chain rule: advance (x, y) by a tiny step and difference r, theta
    const double h = 1e-7;
    const PlanarState p{s.x + h * d.xDot, s.y + h * d.yDot};
    const PlanarState m{s.x - h * d.xDot, s.y - h * d.yDot};
    const double rDotNum = (p.range() - m.range()) / (2 * h);
    const double thDotNum = wrapAngle(p.bearing() - m.bearing()) / (2 * h);
    EXPECT_NEAR(d.rDot, rDotNum, 1e-6 * (1.0 + std::abs(d.rDot)));
    EXPECT_NEAR(d.thetaDot, thDotNum, 1e-6 * (1.0 + std::abs(d.thetaDot)));
    EXPECT_LE(std::abs(d.rDot), 1.0 + vh + 1e-15);
  }
}

TEST(RelativeState, DeadAheadAndDueRight) {
  WorldState w{{1.0, 2.0}, 0.3, {1.0 + 5.0 * std::sin(0.3), 2.0 + 5.0 * std::cos(0.3)}, 0.0};
  auto s = relativeState(w);
  EXPECT_NEAR(s.bearing(), 0.0, 1e-12);
  EXPECT_NEAR(s.range(), 5.0, 1e-12);
  w.hazardPos = w.aircraftPos + headingVector(0.3 + kPi / 2) * 2.0;
  s = relativeState(w);
  EXPECT_NEAR(s.bearing(), kPi / 2, 1e-12);
}

TEST(RelativeState, InverseTransformRecoversHazard) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-100.0, 100.0), ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const WorldState w{{pos(rng), pos(rng)}, ang(rng), {pos(rng), pos(rng)}, ang(rng)};
    const Vec2 back = hazardPositionFromRelative(w.aircraftPos, w.aircraftHeading, relativeState(w));
    EXPECT_NEAR(back.x, w.hazardPos.x, 1e-10);
    EXPECT_NEAR(back.y, w.hazardPos.y, 1e-10);
  }
}

TEST(StepRK4, StraightLineDisplacement) {
  GameConfig cfg;
  cfg.hazardSpeed = 0.7;
  cfg.hazardTurnRate = 1.0;
  const WorldState w{{0, 0}, 0.4, {3, 3}, -1.2};
  const WorldState n = stepRK4(w, {0.0, HazardCommand::turn(0.0)}, cfg);
  EXPECT_NEAR(n.aircraftPos.x, std::sin(0.4) * cfg.stepSize, 1e-15);
  EXPECT_NEAR(n.aircraftPos.y, std::cos(0.4) * cfg.stepSize, 1e-15);
  EXPECT_NEAR(n.hazardPos.x, 3 + 0.7 * std::sin(-1.2) * cfg.stepSize, 1e-15);
  EXPECT_NEAR(n.hazardPos.y, 3 + 0.7 * std::cos(-1.2) * cfg.stepSize, 1e-15);
}

TEST(StepRK4, FullCircleReturnsHeading) {
  GameConfig cfg;
  cfg.stepSize = kTwoPi / 6283.0;
  WorldState w{{0, 0}, 0.25, {10, 10}, 0.0};
  for (int i = 0; i < 6283; ++i) w = stepRK4(w, {1.0, HazardCommand::turn(0.0)}, cfg);
  EXPECT_NEAR(wrapAngle(w.aircraftHeading - 0.25), 0.0, 1e-6);
  EXPECT_NEAR(w.aircraftPos.x, 0.0, 1e-6);
  EXPECT_NEAR(w.aircraftPos.y, 0.0, 1e-6);
}

TEST(StepRK4, HeadingsWrapped) {
  GameConfig cfg;
  cfg.hazardTurnRate = 1.0;
  cfg.stepSize = 0.1;
  WorldState w{{0, 0}, kPi - 0.01, {1, 1}, -kPi + 0.01};
  w = stepRK4(w, {1.0, HazardCommand::turn(-1.0)}, cfg);
  EXPECT_GT(w.aircraftHeading, -kPi);
  EXPECT_LE(w.aircraftHeading, kPi);
  EXPECT_LT(w.aircraftHeading, 0.0);
  EXPECT_GT(w.hazardHeading, 0.0);
}

TEST(StepRK4, FourthOrderConvergence) {
  // Richardson study: errors against a dt/8 reference shrink by ~16 per halving
  GameConfig cfg;
  cfg.hazardSpeed = 0.8;
  cfg.hazardTurnRate = 1.3;
  const WorldState w0{{0, 0}, 0.1, {2, 5}, 2.0};
  auto run = [&](double dt) {
    GameConfig c = cfg;
    c.stepSize = dt;
    WorldState w = w0;
    const int n = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < n; ++i) w = stepRK4(w, {0.7, HazardCommand::turn(-0.6)}, c);
    return w;
  };
  const double dt = 0.05;
  const WorldState ref = run(dt / 8);
  auto err = [&](const WorldState& w) {
    return norm(w.aircraftPos - ref.aircraftPos) + norm(w.hazardPos - ref.hazardPos);
  };
  const double e1 = err(run(dt)), e2 = err(run(dt / 2));
  EXPECT_GE(std::log2(e1 / e2), 3.8);
}

TEST(RangeAcceleration, PureClosureIsZero) {
  GameConfig cfg;
  cfg.hazardSpeed = 0.0;
  const WorldState w{{0, 0}, 0.0, {0, 5}, 0.0};
  EXPECT_NEAR(rangeAcceleration(w, 0.0, 0.0, cfg), 0.0, 1e-15);
}

TEST(RangeAcceleration, StationaryMatchesHazardCentredForm) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), ang(-kPi, kPi), u(-1.0, 1.0);
  GameConfig cfg;
  cfg.hazardSpeed = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const WorldState w{{pos(rng), pos(rng)}, ang(rng), {pos(rng), pos(rng)}, 0.0};
    const double ua = u(rng);
    const double expected = oracle::stationaryRangeAcceleration(w.aircraftPos.x, w.aircraftPos.y, w.aircraftHeading,
                                                                w.hazardPos.x, w.hazardPos.y, ua);
    EXPECT_NEAR(rangeAcceleration(w, ua, 0.0, cfg), expected, 1e-9 * (1.0 + std::abs(expected)));
  }
}

TEST(RangeAcceleration, StationaryArgmaxIsMinusSignTheta) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), ang(-kPi, kPi);
  GameConfig cfg;
  cfg.hazardSpeed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const WorldState w{{0, 0}, ang(rng), {pos(rng), pos(rng)}, 0.0};
    const double theta = relativeState(w).bearing();
    double best = -1e300, arg = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double ua = -1.0 + k / 20.0;
      const double v = rangeAcceleration(w, ua, 0.0, cfg);
      if (v > best) best = v, arg = ua;
    }
    EXPECT_EQ(arg, std::sin(theta) > 0 ? -1.0 : 1.0);
  }
}

TEST(RangeAcceleration, MatchesFiniteDifferenceOfSimulatedRange) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> pos(-5.0, 5.0), ang(-kPi, kPi), u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    GameConfig cfg;
    cfg.hazardSpeed = 0.9;
    cfg.hazardTurnRate = 1.7;
    cfg.stepSize = 1e-4;
    const WorldState w{{0, 0}, ang(rng), {pos(rng), pos(rng)}, ang(rng)};
    if (relativeState(w).range() < 0.5) continue;
    const double ua = u(rng), uh = u(rng);
    const Controls c{ua, HazardCommand::turn(uh)};
    // central second difference of r around the middle sample
    const WorldState w1 = stepRK4(w, c, cfg);
    const WorldState w2 = stepRK4(w1, c, cfg);
    const double r0 = relativeState(w).range(), r1 = relativeState(w1).range(), r2 = relativeState(w2).range();
    const double numeric = (r0 - 2 * r1 + r2) / (cfg.stepSize * cfg.stepSize);
    EXPECT_NEAR(rangeAcceleration(w1, ua, uh, cfg), numeric, 1e-4 * (1.0 + std::abs(numeric)));
  }
}

TEST(RangeAcceleration, AgileHazardRejected) {
  GameConfig cfg;
  cfg.hazardSpeed = 0.5;
  EXPECT_THROW(rangeAcceleration({{0, 0}, 0.0, {1, 1}, 0.0}, 0.0, 0.0, cfg), DomainError);
}

TEST(AgilityLimit, FastTurningHazardApproachesAgileHazard) {
  // hazard steering to a fixed inertial heading: instant (agile) vs finite-rate pursuit of it.
  // The turn lag shrinks the gap as 1 / omega_h.
  const double target = 1.3;
  const WorldState w0{{0, 0}, 0.0, {1.5, 3.0}, 0.3};
  GameConfig agile;
  agile.hazardSpeed = 0.8;
  agile.maxTime = 1.0;
  agile.stepSize = 1e-4;
  SimOptions opt;
  opt.recordTrajectory = true;
  auto aircraft = [](double, const WorldState&, const PlanarState& rel) { return rel.x > 0 ? -1.0 : 1.0; };
  const SimResult a = simulateWith(
      w0, aircraft, [&](double, const WorldState&, const PlanarState&) { return HazardCommand::heading(target); }, agile,
      opt);
  auto gap = [&](double omega) {
    GameConfig fast = agile;
    fast.hazardTurnRate = omega;
    const SimResult f = simulateWith(
        w0, aircraft,
        [&](double, const WorldState& w, const PlanarState&) {
          return HazardCommand::turn(std::clamp(wrapAngle(target - w.hazardHeading) / (omega * agile.stepSize), -1.0, 1.0));
        },
        fast, opt);
    EXPECT_EQ(a.trajectory.samples.size(), f.trajectory.samples.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.trajectory.samples.size(); ++k) {
      worst = std::max(worst, std::abs(a.trajectory.samples[k].range - f.trajectory.samples[k].range));
    }
    return worst;
  };
  const double g2 = gap(1e2), g3 = gap(1e3);
  EXPECT_LT(g3, 1e-3);
  EXPECT_LT(g3, 0.2 * g2);
}

TEST(Kinematics, BearingDriftConsistentWithPolarRates) {
  GameConfig cfg;
  cfg.hazardSpeed = 0.6;
  cfg.hazardTurnRate = 1.0;
  const WorldState w{{0, 0}, 0.2, {2.0, 4.0}, -2.0};
  const WorldState n = stepRK4(w, {0.0, HazardCommand::turn(0.0)}, cfg);
  const auto s0 = relativeState(w), s1 = relativeState(n);
  const auto d = planarDerivatives(s0, 0.0, relativeHeading(w), cfg.hazardSpeed);
  EXPECT_NEAR(wrapAngle(s1.bearing() - s0.bearing()), d.thetaDot * cfg.stepSize, 10 * cfg.stepSize * cfg.stepSize);
  EXPECT_NEAR(s1.range() - s0.range(), d.rDot * cfg.stepSize, 10 * cfg.stepSize * cfg.stepSize);
}
