#pragma once

// Planar equations of motion in normalised units (aircraft speed 1, aircraft
// maximum turn rate 1, so the aircraft turn radius is 1).
//
// Angles are measured clockwise-positive from +y. In the aircraft-fixed frame
// +y is the aircraft velocity and +x is to its right, so a hazard bearing
// theta > 0 is on the right. u_a = +1 is a maximum-rate right turn.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "bearing_game/errors.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

/// Hazard position relative to the aircraft, in the aircraft-fixed frame.
struct PlanarState {
  double x{};
  double y{};

  static PlanarState fromPolar(double range, double bearing) {
    return {range * std::sin(bearing), range * std::cos(bearing)};
  }

  double range() const { return std::hypot(x, y); }
  /// Bearing in (-pi, pi], clockwise-positive from the aircraft velocity.
  double bearing() const { return std::atan2(x, y); }
};

struct WorldState {
  Vec2 aircraftPos;
  double aircraftHeading{};
  Vec2 hazardPos;
  double hazardHeading{};
};

struct GameConfig {
  double hazardSpeed = 0.5;
  /// Hazard turn rate in units of the aircraft turn rate; empty means agile.
  std::optional<double> hazardTurnRate;
  double captureRadius = 0.0;
  double stepSize = 1e-3;
  double maxTime = 20.0;

  bool agile() const { return !hazardTurnRate.has_value(); }

  void validate() const {
    if (!(hazardSpeed >= 0.0)) throw DomainError("hazardSpeed must be non-negative");
    if (hazardTurnRate && !(*hazardTurnRate > 0.0)) {
      throw DomainError("hazardTurnRate must be positive");
    }
    if (!(stepSize > 0.0)) throw DomainError("stepSize must be positive");
    if (!(maxTime > stepSize)) throw DomainError("maxTime must exceed stepSize");
    if (!(captureRadius >= 0.0)) throw DomainError("captureRadius must be non-negative");
  }
};

struct CartesianRates {
  double xDot{};
  double yDot{};
};

struct PlanarRates {
  double rDot{};
  double thetaDot{};
  double xDot{};
  double yDot{};
};

/// Relative-frame dynamics; uh is the hazard heading relative to the aircraft heading.
inline CartesianRates cartesianDerivatives(const PlanarState& s, double ua, double uh, double vh) {
  return {-ua * s.y + vh * std::sin(uh), -1.0 + ua * s.x + vh * std::cos(uh)};
}

inline PlanarRates planarDerivatives(const PlanarState& s, double ua, double uh, double vh) {
  const double r = s.range();
  if (!(r > 0.0)) throw ZeroRange("polar derivatives need a positive range");
  const double theta = s.bearing();
  const CartesianRates c = cartesianDerivatives(s, ua, uh, vh);
  return {-std::cos(theta) + vh * std::cos(uh - theta),
          -ua + (std::sin(theta) + vh * std::sin(uh - theta)) / r, c.xDot, c.yDot};
}

inline PlanarState relativeState(const WorldState& w) {
  const Vec2 d = w.hazardPos - w.aircraftPos;
  const double s = std::sin(w.aircraftHeading);
  const double c = std::cos(w.aircraftHeading);
  // forward = (sin, cos), right = (cos, -sin)
  return {d.x * c - d.y * s, d.x * s + d.y * c};
}

/// Hazard heading relative to the aircraft heading, wrapped to (-pi, pi].
inline double relativeHeading(const WorldState& w) {
  return wrapAngle(w.hazardHeading - w.aircraftHeading);
}

/// Inverse of relativeState for the hazard position.
inline Vec2 hazardPositionFromRelative(const Vec2& aircraftPos, double aircraftHeading,
                                       const PlanarState& rel) {
  const double s = std::sin(aircraftHeading);
  const double c = std::cos(aircraftHeading);
  return aircraftPos + Vec2{rel.x * c + rel.y * s, -rel.x * s + rel.y * c};
}

/// What the hazard does during one integration step.
struct HazardCommand {
  enum class Mode { TurnRate, Heading };

  Mode mode = Mode::TurnRate;
  /// TurnRate: normalised turn command in [-1, 1]. Heading: inertial heading held over the step.
  double value = 0.0;

  static HazardCommand turn(double u) { return {Mode::TurnRate, u}; }
  static HazardCommand heading(double inertialHeading) { return {Mode::Heading, inertialHeading}; }
};

struct Controls {
  double aircraftTurn = 0.0;
  HazardCommand hazard;
};

/// Analytic second derivative of range for a finite-turn-rate (or stationary)
/// hazard. uhTurn is the hazard turn command in [-1, 1].
inline double rangeAcceleration(const WorldState& w, double ua, double uhTurn, const GameConfig& cfg) {
  const PlanarState s = relativeState(w);
  const double r = s.range();
  if (!(r > 0.0)) throw ZeroRange("range acceleration needs a positive range");
  const double vh = cfg.hazardSpeed;
  double omegaH = 0.0;
  if (vh > 0.0) {
    if (!cfg.hazardTurnRate) throw DomainError("range acceleration needs a finite hazard turn rate");
    omegaH = *cfg.hazardTurnRate;
  }
  const double theta = s.bearing();
  const double psi = relativeHeading(w);
  const double thetaDot = -ua + (std::sin(theta) + vh * std::sin(psi - theta)) / r;
  const double psiDot = -ua + omegaH * uhTurn;
  return thetaDot * std::sin(theta) - vh * (psiDot - thetaDot) * std::sin(psi - theta);
}

namespace detail {

struct WorldRate {
  double xa, ya, psia, xh, yh, thetah;
};

inline WorldRate worldRate(double psiA, double thetaH, double ua, double vh, double thetaHDot) {
  return {std::sin(psiA), std::cos(psiA), ua, vh * std::sin(thetaH), vh * std::cos(thetaH), thetaHDot};
}

}  // namespace detail

/// One fixed RK4 step of the inertial dynamics; controls are held over the step.
inline WorldState stepRK4(const WorldState& w, const Controls& u, const GameConfig& cfg) {
  const double dt = cfg.stepSize;
  const double vh = cfg.hazardSpeed;
  const double ua = std::clamp(u.aircraftTurn, -1.0, 1.0);

  double thetaH0 = w.hazardHeading;
  double thetaHDot = 0.0;
  if (u.hazard.mode == HazardCommand::Mode::Heading) {
    thetaH0 = u.hazard.value;
  } else if (u.hazard.value != 0.0) {
    if (!cfg.hazardTurnRate) throw DomainError("turn-rate hazard command needs a finite hazard turn rate");
    thetaHDot = *cfg.hazardTurnRate * std::clamp(u.hazard.value, -1.0, 1.0);
  }

  using detail::worldRate;
  const double psi0 = w.aircraftHeading;
  const auto k1 = worldRate(psi0, thetaH0, ua, vh, thetaHDot);
  const auto k2 = worldRate(psi0 + 0.5 * dt * k1.psia, thetaH0 + 0.5 * dt * k1.thetah, ua, vh, thetaHDot);
  const auto k3 = worldRate(psi0 + 0.5 * dt * k2.psia, thetaH0 + 0.5 * dt * k2.thetah, ua, vh, thetaHDot);
  const auto k4 = worldRate(psi0 + dt * k3.psia, thetaH0 + dt * k3.thetah, ua, vh, thetaHDot);

  auto combine = [&](double a, double b, double c, double d) { return (a + 2.0 * b + 2.0 * c + d) * (dt / 6.0); };

  WorldState out;
  out.aircraftPos = w.aircraftPos + Vec2{combine(k1.xa, k2.xa, k3.xa, k4.xa), combine(k1.ya, k2.ya, k3.ya, k4.ya)};
  out.aircraftHeading = wrapAngle(psi0 + combine(k1.psia, k2.psia, k3.psia, k4.psia));
  out.hazardPos = w.hazardPos + Vec2{combine(k1.xh, k2.xh, k3.xh, k4.xh), combine(k1.yh, k2.yh, k3.yh, k4.yh)};
  out.hazardHeading = wrapAngle(thetaH0 + combine(k1.thetah, k2.thetah, k3.thetah, k4.thetah));
  return out;
}

}  // namespace bearing_game
