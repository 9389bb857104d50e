#pragma once

// Aircraft and hazard control laws.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <variant>

#include "bearing_game/errors.hpp"
#include "bearing_game/game_solver.hpp"
#include "bearing_game/kinematics.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

/// Turn used when the hazard is exactly dead ahead.
enum class TieBreak { Left, Right };

inline double tieBreakTurn(TieBreak t) { return t == TieBreak::Left ? -1.0 : 1.0; }

/// Bearings this close to zero count as dead ahead.
inline constexpr double kDeadAheadEpsilon = 1e-9;

struct AircraftStrategy {
  enum class Kind { OptimalKnownSpeed, BearingOnly };

  Kind kind = Kind::BearingOnly;
  /// Used only by OptimalKnownSpeed.
  double knownHazardSpeed = 0.5;
  TieBreak tieBreak = TieBreak::Left;
  /// Width of the fly-straight arm around theta = +-pi [rad].
  double hysteresisBand = 0.02;

  static AircraftStrategy bearingOnly(double band = 0.02, TieBreak t = TieBreak::Left) {
    return {Kind::BearingOnly, 0.0, t, band};
  }
  static AircraftStrategy optimal(double vh, TieBreak t = TieBreak::Left) {
    return {Kind::OptimalKnownSpeed, vh, t, 0.0};
  }

  void validate() const {
    if (!(hysteresisBand >= 0.0 && hysteresisBand <= 0.1)) {
      throw DomainError("hysteresisBand must lie in [0, 0.1] rad");
    }
    if (kind == Kind::OptimalKnownSpeed && !(knownHazardSpeed > 0.0)) {
      throw DomainError("knownHazardSpeed must be positive");
    }
  }
};

/// Turn away from the hazard until it is behind, then fly straight.
inline double bearingOnlyCommand(double theta, const AircraftStrategy& strat) {
  const double a = std::abs(theta);
  if (a < kDeadAheadEpsilon) return tieBreakTurn(strat.tieBreak);
  if (a >= kPi - strat.hysteresisBand) return 0.0;
  return theta > 0.0 ? -1.0 : 1.0;
}

struct AircraftCommand {
  double ua{};
  bool terminated{};
};

/// Optimal turn when the hazard speed is known. Past the line of minimum range
/// the game is over and the aircraft holds u_a = 0.
inline AircraftCommand optimalAircraftCommand(double theta, double vh, const AircraftStrategy& strat) {
  const double thetaT = terminalBearing(vh);
  const double a = std::abs(theta);
  if (a >= thetaT) return {0.0, true};
  if (a < kDeadAheadEpsilon) return {tieBreakTurn(strat.tieBreak), false};
  return {theta > 0.0 ? -1.0 : 1.0, false};
}

// Hazard behaviours -----------------------------------------------------------

/// Agile hazard playing the game optimally (knows the aircraft's strategy set).
struct OptimalAgile {};

/// Flies straight; fixedHeading is inertial, empty keeps the initial heading.
struct NonResponsive {
  std::optional<double> fixedHeading;
};

/// Turn-rate-limited hazard running saturated proportional pursuit.
struct FiniteTurn {
  double turnRate = 1.0;  // omega_h in units of the aircraft turn rate
  double gain = 5.0;
};

struct Stationary {};

using HazardBehavior = std::variant<OptimalAgile, NonResponsive, FiniteTurn, Stationary>;

inline void validate(const HazardBehavior& h) {
  if (const auto* f = std::get_if<FiniteTurn>(&h)) {
    if (!(f->turnRate > 0.0)) throw DomainError("FiniteTurn needs a positive turn rate");
    if (!(f->gain > 0.0)) throw DomainError("FiniteTurn needs a positive pursuit gain");
  }
}

/// Optimal relative hazard heading at retro time tau before termination.
inline double optimalAgileHazardHeading(const TerminalCondition& tc, double tau) {
  return retroHazardHeading(tc, tau);
}

/// Closed-loop optimal agile hazard. Each call finds the optimal trajectory
/// through the current state (warm-started from the previous one) and returns
/// its relative heading. Under optimal aircraft play this is the straight
/// inertial line to the predicted terminal point; after an aircraft deviation
/// it re-commits to the new optimal line.
class AgileHazardPlanner {
 public:
  explicit AgileHazardPlanner(double vh) : vh_(vh) {
    if (vh < 1.0) field_ = std::make_shared<FieldInverse>(vh);
  }
  AgileHazardPlanner(std::shared_ptr<const FieldInverse> field) : vh_(field->hazardSpeed()), field_(std::move(field)) {}

  double hazardSpeed() const { return vh_; }

  /// Relative hazard heading for state s.
  double heading(const PlanarState& s) {
    if (!field_) return wrapAngle(s.bearing() + kPi);
    try {
      const FieldLocation loc = field_->locate(s, warm_ ? &*warm_ : nullptr);
      warm_ = loc;
      return field_->hazardHeading(s, loc);
    } catch (const OutsideFieldCoverage&) {
      warm_.reset();
      return wrapAngle(s.bearing() + kPi);
    }
  }

  const std::optional<FieldLocation>& lastLocation() const { return warm_; }

 private:
  double vh_;
  std::shared_ptr<const FieldInverse> field_;
  std::optional<FieldLocation> warm_;
};

/// Inertial bearing from the hazard to the aircraft, clockwise from +y.
inline double bearingHazardToAircraft(const WorldState& w) {
  const Vec2 d = w.aircraftPos - w.hazardPos;
  if (!(norm(d) > 0.0)) throw ZeroRange("hazard and aircraft coincide");
  return std::atan2(d.x, d.y);
}

/// Saturated proportional pursuit: clamp(k * wrap(bearing_to_aircraft - theta_h), -1, 1).
inline double finiteTurnPursuitCommand(const WorldState& w, double gain = 5.0) {
  const double err = wrapAngle(bearingHazardToAircraft(w) - w.hazardHeading);
  return std::clamp(gain * err, -1.0, 1.0);
}

}  // namespace bearing_game
