#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "bearing_game/game_solver.hpp"

using namespace bearing_game;

TEST(TerminalBearing, Values) {
  EXPECT_NEAR(terminalBearing(0.5), 2.0 * kPi / 3.0, 1e-15);
  EXPECT_NEAR(terminalBearing(0.0), kPi / 2.0, 1e-15);
  EXPECT_NEAR(terminalBearing(1.0), kPi, 1e-15);
  EXPECT_THROW(terminalBearing(1.01), UndefinedTerminationLine);
  EXPECT_THROW(terminalBearing(-0.1), DomainError);
}

TEST(TerminalCondition, Fields) {
  const auto tc = TerminalCondition::make(0.5, 2.0, Family::Right);
  EXPECT_EQ(tc.uaTerminal, -1.0);
  EXPECT_NEAR(tc.uhTerminal, wrapAngle(2.0 * kPi / 3.0 + kPi), 1e-15);
  EXPECT_NEAR(tc.point().range(), 2.0, 1e-15);
  EXPECT_NEAR(tc.point().bearing(), 2.0 * kPi / 3.0, 1e-15);
  const auto tl = TerminalCondition::make(0.5, 2.0, Family::Left);
  EXPECT_EQ(tl.uaTerminal, 1.0);
  EXPECT_NEAR(tl.point().bearing(), -2.0 * kPi / 3.0, 1e-15);
  EXPECT_THROW(TerminalCondition::make(0.5, -1.0, Family::Right), DomainError);
}

// Frozen values computed from the closed form and confirmed against RK4.
TEST(RetroSolution, FrozenAdjoint) {
  const auto tc = TerminalCondition::make(0.5, 1.0, Family::Right);
  const auto v = retroAdjoint(tc, 0.5);
  EXPECT_NEAR(v.Vx, 0.999721561817393, 1e-12);
  EXPECT_NEAR(v.Vy, -0.023596585290912, 1e-12);
}

TEST(RetroSolution, FrozenState) {
  const auto tc = TerminalCondition::make(0.5, 1.0, Family::Right);
  const auto s = retroState(tc, 1.0);
  EXPECT_NEAR(s.x, 0.873278828381739, 1e-12);
  EXPECT_NEAR(s.y, 1.529347129493510, 1e-12);
}

TEST(RetroSolution, MatchesIntegration) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> vhD(0.05, 1.0), rD(0.0, 5.0), tD(0.0, 2.5);
  for (int i = 0; i < 200; ++i) {
    const double vh = vhD(rng);
    const Family f = i % 2 ? Family::Left : Family::Right;
    const auto tc = TerminalCondition::make(vh, rD(rng), f);
    const double tau = tD(rng);
    const auto p0 = tc.point();
    const auto ref = oracle::retroIntegrate(p0.x, p0.y, tc.uaTerminal, vh, tc.uhTerminal, tau);
    const auto got = retroStateUnchecked(tc, tau);
    EXPECT_NEAR(got.x, ref.x, 1e-9);
    EXPECT_NEAR(got.y, ref.y, 1e-9);
    const auto vref = oracle::retroAdjointIntegrate(tc.VxT, tc.VyT, tc.uaTerminal, tau);
    const auto v = retroAdjoint(tc, tau);
    EXPECT_NEAR(v.Vx, vref.x, 1e-10);
    EXPECT_NEAR(v.Vy, vref.y, 1e-10);
  }
}

TEST(RetroSolution, MirrorSymmetry) {
  for (const double vh : {0.2, 0.5, 0.9}) {
    const auto r = TerminalCondition::make(vh, 0.7, Family::Right);
    const auto l = TerminalCondition::make(vh, 0.7, Family::Left);
    for (double tau = 0.0; tau < 2.0; tau += 0.05) {
      const auto a = retroStateUnchecked(r, tau);
      const auto b = retroStateUnchecked(l, tau);
      EXPECT_NEAR(a.x, -b.x, 1e-13);
      EXPECT_NEAR(a.y, b.y, 1e-13);
      EXPECT_NEAR(retroHazardHeading(r, tau), -retroHazardHeading(l, tau), 1e-12);
    }
  }
}

// Along the solution the Hamiltonian, written independently from the forward
// dynamics and the returned gradient, vanishes; the hazard heading minimises it
// and the aircraft turn maximises it.
TEST(RetroSolution, HamiltonianResidualAndSaddle) {
  for (const double vh : {0.25, 0.5, 0.75, 1.0}) {
    for (const Family f : {Family::Right, Family::Left}) {
      const auto tc = TerminalCondition::make(vh, 0.8, f);
      const double tauEnd = std::min({tc.switchTau, yAxisCrossingTau(tc), 3.0});
      for (int k = 0; k <= 50; ++k) {
        const double tau = tauEnd * k / 50.0;
        const auto s = retroSample(tc, tau);
        auto H = [&](double ua, double uh) {
          const double xd = -ua * s.y + vh * std::sin(uh);
          const double yd = -1.0 + ua * s.x + vh * std::cos(uh);
          return s.Vx * xd + s.Vy * yd;
        };
        EXPECT_NEAR(H(s.ua, s.uh), 0.0, 1e-8) << vh << " " << tau;
        for (int j = 0; j < 72; ++j) EXPECT_LE(H(s.ua, s.uh), H(s.ua, j * kTwoPi / 72) + 1e-12);
        EXPECT_GE(H(s.ua, s.uh), H(-s.ua, s.uh) - 1e-12);
      }
    }
  }
}

TEST(Switching, ZeroAtTerminalAndSignedInside) {
  for (const double vh : {0.3, 0.6, 0.9}) {
    const auto tc = TerminalCondition::make(vh, 1.0, Family::Right);
    EXPECT_NEAR(switchingFunction(tc, 0.0), 0.0, 1e-14);
    const double end = std::min({tc.switchTau, yAxisCrossingTau(tc)});
    for (int k = 1; k < 100; ++k) EXPECT_LT(switchingFunction(tc, end * k / 100.0), 0.0);
  }
}

TEST(Switching, RetroStateRejectsPastSwitch) {
  const auto tc = TerminalCondition::make(0.5, 0.2, Family::Right);
  ASSERT_TRUE(std::isfinite(tc.switchTau));
  EXPECT_THROW(retroState(tc, tc.switchTau + 0.01), OutsideRegularRegion);
  EXPECT_THROW(retroState(tc, -0.1), DomainError);
  EXPECT_NO_THROW(retroState(tc, 0.5 * tc.switchTau));
}

TEST(Switching, ZeroTerminalRangeSwitchesAtTwiceTerminalBearing) {
  for (const double vh : {0.3, 0.5, 0.8}) {
    const auto tc = TerminalCondition::make(vh, 1e-9, Family::Right);
    EXPECT_NEAR(tc.switchTau, 2.0 * terminalBearing(vh), 1e-6);
  }
}

TEST(Field, TrajectoriesStayOnTheirSide) {
  const auto rTs = geometricRanges(0.05, 4.0, 12);
  const auto field = trajectoryField(0.5, rTs);
  EXPECT_EQ(field.size(), 24u);
  for (const auto& tr : field) {
    const double sgn = familySign(tr.terminal.family);
    ASSERT_GT(tr.samples.size(), 2u);
    for (std::size_t i = 0; i + 1 < tr.samples.size(); ++i) EXPECT_GT(sgn * tr.samples[i].x, -1e-12);
  }
}

TEST(Field, RejectsBadSpeed) {
  const std::vector<double> r{1.0};
  EXPECT_THROW(trajectoryField(0.0, r), DomainError);
  EXPECT_THROW(trajectoryField(1.2, r), DomainError);
  EXPECT_THROW(geometricRanges(1.0, 0.5, 5), DomainError);
}

TEST(Barrier, StartsOnTerminalLine) {
  const auto b = barrier(0.5, 0.4);
  const double th = 2.0 * kPi / 3.0;
  EXPECT_NEAR(b.rightBranch.front().x, 0.4 * std::sin(th), 1e-14);
  EXPECT_NEAR(b.rightBranch.front().y, 0.4 * std::cos(th), 1e-14);
  EXPECT_NEAR(b.leftBranch.front().x, -0.4 * std::sin(th), 1e-14);
  EXPECT_NEAR(b.rightBranch.back().x, 0.0, 1e-9);
  EXPECT_NEAR(b.leftBranch.back().x, 0.0, 1e-9);
  EXPECT_NEAR(b.rightBranch.back().y, b.leftBranch.back().y, 1e-9);
}

TEST(Barrier, NestedInRho) {
  const auto small = barrier(0.5, 0.2);
  const auto large = barrier(0.5, 0.6);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> x(-2, 2), y(-1, 3);
  int inSmall = 0;
  for (int i = 0; i < 4000; ++i) {
    const PlanarState s{x(rng), y(rng)};
    if (small.contains(s)) {
      ++inSmall;
      EXPECT_TRUE(large.contains(s));
    }
  }
  EXPECT_GT(inSmall, 50);
}

TEST(Barrier, RejectsBadArguments) {
  EXPECT_THROW(barrier(1.2, 0.5), DomainError);
  EXPECT_THROW(barrier(0.5, 0.0), DomainError);
}

TEST(FieldInverse, RecoversRetroParameters) {
  const FieldInverse inv(0.5);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> rD(0.05, 5.0), fD(0.05, 0.95);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const auto tc = TerminalCondition::make(0.5, rD(rng), i % 2 ? Family::Left : Family::Right);
    const double tau = fD(rng) * std::min(tc.switchTau, yAxisCrossingTau(tc));
    const auto s = retroStateUnchecked(tc, tau);
    const auto loc = inv.locate(s);
    if (loc.region != FieldLocation::Region::Regular) continue;
    EXPECT_EQ(loc.family, tc.family);
    EXPECT_NEAR(loc.rT, tc.rT, 1e-8 * std::max(1.0, tc.rT));
    EXPECT_NEAR(loc.tau, tau, 1e-8);
    EXPECT_NEAR(inv.hazardHeading(s, loc), retroHazardHeading(tc, tau), 1e-8);
    ++checked;
  }
  EXPECT_GT(checked, 190);
}

TEST(FieldInverse, Regions) {
  const FieldInverse inv(0.5);
  EXPECT_EQ(inv.locate({0.0, -1.0}).region, FieldLocation::Region::Terminal);
  EXPECT_DOUBLE_EQ(inv.value({0.0, -1.0}), 1.0);
  EXPECT_EQ(inv.locate({0.0, 0.0}).region, FieldLocation::Region::Capture);
  EXPECT_EQ(inv.locate({0.05, 0.3}).region, FieldLocation::Region::Capture);
  EXPECT_EQ(inv.value({0.05, 0.3}), 0.0);
}

TEST(ValueFunction, FastHazardAlwaysCaptures) {
  EXPECT_EQ(valueFunction({3.0, 4.0}, 1.5), 0.0);
  EXPECT_EQ(valueFunction({-10.0, 0.0}, 1.01), 0.0);
}

TEST(ValueFunction, MirrorAndTerminal) {
  const FieldInverse inv(0.6);
  for (const PlanarState s : {PlanarState{1.0, 2.0}, PlanarState{2.5, 0.5}, PlanarState{0.4, 3.0}}) {
    EXPECT_NEAR(inv.value(s), inv.value({-s.x, s.y}), 1e-9);
  }
  const auto tc = TerminalCondition::make(0.6, 1.3, Family::Right);
  EXPECT_NEAR(inv.value(tc.point()), 1.3, 1e-12);
}

TEST(Intercept, ReachesTurnCircle) {
  const PlanarState s{0.3, 0.6};
  const auto h = interceptHeading(s, 0.5, -1.0);
  ASSERT_TRUE(h.has_value());
  // march the straight path and check it meets the turn within one step
  double best = 1e9;
  for (int i = 0; i <= 20000; ++i) {
    const double t = kTwoPi * i / 20000.0;
    const double hx = s.x + 0.5 * t * std::sin(*h), hy = s.y + 0.5 * t * std::cos(*h);
    best = std::min(best, std::hypot(hx + (1.0 - std::cos(t)), hy - std::sin(t)));
  }
  EXPECT_LT(best, 1e-3);
  EXPECT_FALSE(interceptHeading({0.0, -50.0}, 0.1, -1.0).has_value());
}
