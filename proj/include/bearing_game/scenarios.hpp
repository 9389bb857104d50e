#pragma once

// Encounter catalogue, collision-course construction and SI units.

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "bearing_game/errors.hpp"
#include "bearing_game/kinematics.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

inline constexpr double kKnotToMps = 0.514444;
inline constexpr double kGravity = 9.81;
/// Near mid-air collision radius (500 ft).
inline constexpr double kNmacRadiusM = 152.4;
inline constexpr std::array<double, 3> kSuiteRangesM{1000.0, 1500.0, 2000.0};

enum class CaseId { H1, H2, C1, C6, C11, C16, O1, O2 };

inline constexpr std::array<CaseId, 8> kAllCases{CaseId::H1, CaseId::H2,  CaseId::C1, CaseId::C6,
                                                 CaseId::C11, CaseId::C16, CaseId::O1, CaseId::O2};

inline const char* toString(CaseId id) {
  static constexpr std::array<const char*, 8> names{"H1", "H2", "C1", "C6", "C11", "C16", "O1", "O2"};
  return names[static_cast<std::size_t>(id)];
}

inline CaseId parseCaseId(std::string_view s) {
  for (const CaseId id : kAllCases) {
    if (s == toString(id)) return id;
  }
  throw ConfigError("case_id", "unknown case '" + std::string(s) + "' (expected H1, H2, C1, C6, C11, C16, O1 or O2)");
}

struct TestCase {
  CaseId id{};
  double vaKnots{};
  double speedRatio{};
  double intersectAngleDeg{};
  std::string description;
};

inline const std::array<TestCase, 8>& catalog() {
  static const std::array<TestCase, 8> cases{{
      {CaseId::H1, 50.0, 3.0, 180.0, "Head-on, fast hazard"},
      {CaseId::H2, 42.0, 3.75, 180.0, "Head-on, faster hazard"},
      {CaseId::C1, 50.0, 1.33, 5.0, "Converging, hazard on right"},
      {CaseId::C6, 60.0, 1.0, -60.0, "Converging, hazard on left"},
      {CaseId::C11, 60.0, 0.66, 120.0, "Converging, hazard on right"},
      {CaseId::C16, 60.0, 0.75, -175.0, "Converging, hazard on left"},
      {CaseId::O1, 42.0, 3.80, 0.0, "Overtaking, hazard from behind"},
      {CaseId::O2, 60.0, 0.66, 0.0, "Overtaking, aircraft overtakes hazard"},
  }};
  return cases;
}

inline const TestCase& testCase(CaseId id) { return catalog()[static_cast<std::size_t>(id)]; }

/// SI scales for the normalised game: v_a = 1, omega_a = 1.
struct UnitSystem {
  double aircraftSpeedSI{};     // [m/s]
  double aircraftTurnRateSI{};  // [rad/s]

  /// Level turn at the given bank angle: omega = g tan(bank) / v.
  static UnitSystem fromKnots(double vaKnots, double bankDeg = 60.0) {
    if (!(vaKnots > 0.0)) throw DomainError("aircraft speed must be positive");
    if (!(bankDeg > 0.0 && bankDeg < 90.0)) throw DomainError("bank angle must lie in (0, 90) deg");
    const double v = vaKnots * kKnotToMps;
    return {v, kGravity * std::tan(bankDeg * kPi / 180.0) / v};
  }

  double lengthScale() const { return aircraftSpeedSI / aircraftTurnRateSI; }  // turn radius [m]
  double timeScale() const { return 1.0 / aircraftTurnRateSI; }               // [s]

  double toNormalizedLength(double meters) const { return meters / lengthScale(); }
  double toSILength(double normalized) const { return normalized * lengthScale(); }
  double toNormalizedTime(double seconds) const { return seconds / timeScale(); }
  double toSITime(double normalized) const { return normalized * timeScale(); }

  WorldState toSI(const WorldState& w) const {
    const double L = lengthScale();
    return {w.aircraftPos * L, w.aircraftHeading, w.hazardPos * L, w.hazardHeading};
  }
  WorldState toNormalized(const WorldState& w) const {
    const double L = lengthScale();
    return {w.aircraftPos * (1.0 / L), w.aircraftHeading, w.hazardPos * (1.0 / L), w.hazardHeading};
  }
};

/// Inertial hazard heading for an intersect angle. Positive intersect angles put
/// the hazard on the aircraft's right, so the hazard heads to the left.
inline double hazardHeadingFromIntersect(double intersectDeg) { return wrapAngle(-intersectDeg * kPi / 180.0); }

/// Aircraft at the origin heading +y, hazard on the straight-line collision
/// course at normalised range r0 (relative velocity along the line of sight).
inline WorldState collisionCourse(double speedRatio, double hazardHeading, double r0) {
  if (!(r0 > 0.0)) throw DomainError("initial range must be positive");
  if (!(speedRatio >= 0.0)) throw DomainError("speed ratio must be non-negative");
  const Vec2 closing = Vec2{0.0, 1.0} - headingVector(hazardHeading) * speedRatio;
  const double c = norm(closing);
  if (c < 1e-12) throw NoCollisionGeometry("equal velocities: the range never closes");
  return {{0.0, 0.0}, 0.0, closing * (r0 / c), hazardHeading};
}

/// Normalised time to collision for a collision-course encounter.
inline double timeToCollision(double speedRatio, double hazardHeading, double r0) {
  return r0 / norm(Vec2{0.0, 1.0} - headingVector(hazardHeading) * speedRatio);
}

/// Normalised initial conditions for a catalogue case at r0 metres.
inline WorldState buildInitialConditions(const TestCase& tc, double r0SI, const UnitSystem& units) {
  if (!(r0SI > 0.0)) throw DomainError("r0 must be positive");
  return collisionCourse(tc.speedRatio, hazardHeadingFromIntersect(tc.intersectAngleDeg),
                         units.toNormalizedLength(r0SI));
}

inline WorldState buildInitialConditions(const TestCase& tc, double r0SI) {
  return buildInitialConditions(tc, r0SI, UnitSystem::fromKnots(tc.vaKnots));
}

/// Default run length: twice the unaccelerated time to collision plus margin.
inline double defaultMaxTime(double speedRatio, double hazardHeading, double r0) {
  return 2.0 * timeToCollision(speedRatio, hazardHeading, r0) + 10.0;
}

/// Side of the aircraft the hazard starts on: +1 right, -1 left, 0 on the axis.
inline int initialSide(const WorldState& w, double tol = 1e-9) {
  const double x = relativeState(w).x;
  return x > tol ? 1 : (x < -tol ? -1 : 0);
}

}  // namespace bearing_game
