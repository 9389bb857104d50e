// Flies one catalogue encounter against a non-responsive hazard and then the
// same relative geometry against an optimal agile hazard.

#include <cstdio>

#include "bearing_game/bearing_game.hpp"

using namespace bearing_game;

int main() {
  const TestCase& tc = testCase(CaseId::C11);
  const UnitSystem units = UnitSystem::fromKnots(tc.vaKnots);
  const WorldState w0 = buildInitialConditions(tc, 2000.0, units);

  GameConfig cfg;
  cfg.hazardSpeed = tc.speedRatio;
  cfg.maxTime = defaultMaxTime(tc.speedRatio, w0.hazardHeading, relativeState(w0).range());
  SimOptions opt;
  opt.nmacRadius = units.toNormalizedLength(kNmacRadiusM);

  const SimResult straight = simulate(w0, AircraftStrategy::bearingOnly(), NonResponsive{}, cfg, opt);
  std::printf("%s (%s), r0 = 2000 m, turn radius %.1f m\n", toString(tc.id), tc.description.c_str(),
              units.lengthScale());
  std::printf("  vs non-responsive hazard: miss %.1f m after %.1f s\n", units.toSILength(straight.missDistance),
              units.toSITime(straight.missTime));

  // A slower hazard that steers optimally: the value function predicts the miss.
  const double vh = 0.5;
  const PlanarState s{1.2, 3.0};
  cfg.hazardSpeed = vh;
  cfg.maxTime = 20.0;
  const SimResult game =
      simulate(worldFromRelative(s), AircraftStrategy::optimal(vh), OptimalAgile{}, cfg, {.stopAfterMiss = true});
  std::printf("  optimal play from (x, y) = (%.1f, %.1f), v_h = %.1f: miss %.4f, value %.4f\n", s.x, s.y, vh,
              game.missDistance, valueFunction(s, vh));
  return 0;
}
