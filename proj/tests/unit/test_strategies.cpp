#include <gtest/gtest.h>

#include <random>

#include "bearing_game/engine.hpp"
#include "bearing_game/strategies.hpp"

using namespace bearing_game;

TEST(BearingOnly, Branches) {
  const auto s = AircraftStrategy::bearingOnly();
  EXPECT_EQ(bearingOnlyCommand(kPi / 4, s), -1.0);
  EXPECT_EQ(bearingOnlyCommand(-0.1, s), 1.0);
  EXPECT_EQ(bearingOnlyCommand(kPi, s), 0.0);
  EXPECT_EQ(bearingOnlyCommand(-kPi + 0.01, s), 0.0);  // inside the 0.02 band
  EXPECT_EQ(bearingOnlyCommand(kPi - 0.03, s), -1.0);
}

TEST(BearingOnly, TieBreakAtDeadAhead) {
  EXPECT_EQ(bearingOnlyCommand(0.0, AircraftStrategy::bearingOnly()), -1.0);
  EXPECT_EQ(bearingOnlyCommand(0.0, AircraftStrategy::bearingOnly(0.02, TieBreak::Right)), 1.0);
}

TEST(BearingOnly, ZeroBandOnlyStraightWhenBehind) {
  const auto s = AircraftStrategy::bearingOnly(0.0);
  EXPECT_EQ(bearingOnlyCommand(kPi, s), 0.0);
  EXPECT_EQ(bearingOnlyCommand(kPi - 1e-6, s), -1.0);
}

TEST(BearingOnly, OddSymmetry) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  const auto s = AircraftStrategy::bearingOnly();
  for (int i = 0; i < 10000; ++i) {
    const double t = th(rng);
    if (std::abs(t) < 1e-6 || std::abs(t) > kPi - 1e-6) continue;
    EXPECT_EQ(bearingOnlyCommand(-t, s), -bearingOnlyCommand(t, s));
  }
}

TEST(AircraftStrategy, BandValidated) {
  EXPECT_THROW(AircraftStrategy::bearingOnly(0.2).validate(), DomainError);
  EXPECT_THROW(AircraftStrategy::bearingOnly(-0.01).validate(), DomainError);
  EXPECT_NO_THROW(AircraftStrategy::bearingOnly(0.1).validate());
}

TEST(OptimalAircraft, TerminationLine) {
  const auto s = AircraftStrategy::optimal(0.5);
  auto c = optimalAircraftCommand(1.9, 0.5, s);
  EXPECT_EQ(c.ua, -1.0);
  EXPECT_FALSE(c.terminated);
  c = optimalAircraftCommand(2.2, 0.5, s);
  EXPECT_TRUE(c.terminated);
  EXPECT_EQ(c.ua, 0.0);
  EXPECT_TRUE(optimalAircraftCommand(-2.2, 0.5, s).terminated);
}

TEST(OptimalAircraft, UnitSpeedTerminatesOnlyBehind) {
  const auto s = AircraftStrategy::optimal(1.0);
  EXPECT_FALSE(optimalAircraftCommand(kPi - 1e-6, 1.0, s).terminated);
  EXPECT_TRUE(optimalAircraftCommand(kPi, 1.0, s).terminated);
  EXPECT_EQ(bearingOnlyCommand(kPi, AircraftStrategy::bearingOnly(0.0)), 0.0);
}

TEST(OptimalAircraft, FastHazardHasNoTerminationLine) {
  EXPECT_THROW(optimalAircraftCommand(0.3, 1.5, AircraftStrategy::optimal(1.5)), UndefinedTerminationLine);
}

TEST(OptimalAircraft, AgreesWithBearingOnlyBeforeTermination) {
  std::mt19937_64 rng(32);
  for (const double vh : {0.25, 0.5, 0.75, 1.0}) {
    const double thT = terminalBearing(vh);
    std::uniform_real_distribution<double> th(-thT, thT);
    for (int i = 0; i < 2000; ++i) {
      const double t = th(rng);
      if (std::abs(t) < 1e-9 || std::abs(t) >= thT) continue;
      EXPECT_EQ(optimalAircraftCommand(t, vh, AircraftStrategy::optimal(vh)).ua,
                bearingOnlyCommand(t, AircraftStrategy::bearingOnly(0.0)));
    }
  }
}

TEST(AgileHazard, PointsAtAircraftOnTerminalLine) {
  AgileHazardPlanner p(0.5);
  const double th = terminalBearing(0.5);
  const auto s = PlanarState::fromPolar(1.3, th);
  EXPECT_NEAR(p.heading(s), wrapAngle(th + kPi), 1e-12);
}

TEST(AgileHazard, SingularArcPointsStraightDown) {
  AgileHazardPlanner p(0.5);
  EXPECT_NEAR(std::abs(p.heading({0.0, 3.0})), kPi, 1e-12);
}

TEST(AgileHazard, RetroHeadingLinearInTau) {
  const auto tc = TerminalCondition::make(0.5, 1.0, Family::Right);
  for (const double tau : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(wrapAngle(optimalAgileHazardHeading(tc, tau) - optimalAgileHazardHeading(tc, 0.0)),
                tau * tc.uaTerminal, 1e-12);
  }
}

TEST(AgileHazard, HoldsStraightInertialLineUnderOptimalPlay) {
  const double vh = 0.5;
  const auto tc = TerminalCondition::make(vh, 0.8, Family::Right);
  const PlanarState s = retroState(tc, 1.0);
  GameConfig cfg;
  cfg.hazardSpeed = vh;
  cfg.maxTime = 5.0;
  SimOptions opt;
  opt.recordTrajectory = true;
  opt.stopAfterMiss = true;
  const SimResult r = simulate(worldFromRelative(s), AircraftStrategy::optimal(vh), OptimalAgile{}, cfg, opt);
  // commanded inertial heading = aircraft heading + relative command
  auto inertial = [](const TrajectorySample& smp) { return smp.world.aircraftHeading + smp.hazardCommand; };
  const double h0 = inertial(r.trajectory.samples.front());
  for (const auto& smp : r.trajectory.samples) {
    if (smp.t > r.missTime - 0.01) break;
    EXPECT_NEAR(wrapAngle(inertial(smp) - h0), 0.0, 1e-6) << smp.t;
  }
}

TEST(FiniteTurnPursuit, AlreadyPointing) {
  const WorldState w{{0, 10}, 0.0, {0, 0}, 0.0};
  EXPECT_NEAR(finiteTurnPursuitCommand(w), 0.0, 1e-15);
}

TEST(FiniteTurnPursuit, SaturatesTowardAircraft) {
  const WorldState w{{-10, 0}, 0.0, {0, 0}, 0.0};  // aircraft 90 deg left of hazard heading
  EXPECT_EQ(finiteTurnPursuitCommand(w), -1.0);
}

TEST(FiniteTurnPursuit, ProportionalInsideClamp) {
  const double d = 0.05;
  const WorldState w{{10 * std::sin(d), 10 * std::cos(d)}, 0.0, {0, 0}, 0.0};
  EXPECT_NEAR(finiteTurnPursuitCommand(w), 5 * d, 1e-12);
  EXPECT_THROW(finiteTurnPursuitCommand({{0, 0}, 0.0, {0, 0}, 0.0}), ZeroRange);
}

TEST(HazardBehavior, FiniteTurnNeedsPositiveRate) {
  EXPECT_THROW(validate(HazardBehavior{FiniteTurn{0.0, 5.0}}), DomainError);
  EXPECT_NO_THROW(validate(HazardBehavior{FiniteTurn{0.5, 5.0}}));
}

TEST(ClosedLoop, OptimalPlayEndsOnLineOfMinimumRange) {
  for (const double vh : {0.25, 0.5, 0.75}) {
    const auto tc = TerminalCondition::make(vh, 1.5, Family::Left);
    const PlanarState s = retroState(tc, 0.7 * std::min(tc.switchTau, yAxisCrossingTau(tc)));
    GameConfig cfg;
    cfg.hazardSpeed = vh;
    SimOptions opt;
    opt.stopAfterMiss = true;
    const SimResult r = simulate(worldFromRelative(s), AircraftStrategy::optimal(vh), OptimalAgile{}, cfg, opt);
    EXPECT_NEAR(std::cos(r.terminalTheta), -vh, 5e-3);
    EXPECT_NEAR(r.missDistance, 1.5, 2e-3);
  }
}

TEST(ClosedLoop, CommandMaximisesRangeAccelerationAgainstFiniteTurnHazard) {
  const WorldState w0{{0, 0}, 0.0, {2.0, 6.0}, kPi};
  GameConfig cfg;
  cfg.hazardSpeed = 0.8;
  cfg.maxTime = 8.0;
  SimOptions opt;
  opt.recordTrajectory = true;
  const AircraftStrategy strat = AircraftStrategy::bearingOnly(0.0);
  const FiniteTurn hazard{1.0, 5.0};
  const SimResult r = simulate(w0, strat, hazard, cfg, opt);
  GameConfig eff = effectiveConfig(hazard, cfg);
  int checked = 0;
  for (const auto& s : r.trajectory.samples) {
    if (s.range < 1e-6) continue;
    double best = -1e300;
    for (int k = 0; k <= 20; ++k) best = std::max(best, rangeAcceleration(s.world, -1.0 + 0.1 * k, s.hazardCommand, eff));
    EXPECT_LE(best - rangeAcceleration(s.world, s.ua, s.hazardCommand, eff), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}
