#pragma once

// Three-dimensional relative geometry and its reduction to the conflict plane
// spanned by the aircraft velocity and the line of sight. The game itself is
// solved in that plane; the 3D code here exists to build and check the reduction.

#include <algorithm>
#include <cmath>

#include "bearing_game/errors.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

/// Smallest vector magnitude accepted for normalisation (unit scale).
inline constexpr double kDegenerateEpsilon = 1e-12;
/// Below this sin(theta) the line of sight is treated as collinear with V_a.
inline constexpr double kCollinearSinEpsilon = 1e-9;

struct RelativeGeometry3D {
  Vec3 losVector;         // aircraft -> hazard [m]
  Vec3 aircraftVelocity;  // [m/s]
  Vec3 hazardVelocity;    // [m/s]
};

/// theta: V_a vs LOS, phi: V_h vs LOS, psi: V_a vs V_h. All in [0, pi].
struct AngleTriple {
  double theta{};
  double phi{};
  double psi{};
};

namespace detail {

inline Vec3 unitOrThrow(const Vec3& v, const char* what) {
  const double n = norm(v);
  if (!(n > kDegenerateEpsilon)) {
    throw DegenerateVector(std::string(what) + " has near-zero magnitude");
  }
  return v * (1.0 / n);
}

inline double angleBetweenUnit(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

}  // namespace detail

inline AngleTriple anglesFromVectors(const RelativeGeometry3D& g) {
  const Vec3 eR = detail::unitOrThrow(g.losVector, "line-of-sight vector");
  const Vec3 eA = detail::unitOrThrow(g.aircraftVelocity, "aircraft velocity");
  const Vec3 eH = detail::unitOrThrow(g.hazardVelocity, "hazard velocity");
  return {detail::angleBetweenUnit(eA, eR), detail::angleBetweenUnit(eH, eR),
          detail::angleBetweenUnit(eA, eH)};
}

/// Spherical triangle inequality for the three pairwise angles:
/// |theta - phi| <= psi <= min(theta + phi, 2 pi - theta - phi).
inline bool psiWithinBounds(const AngleTriple& a, double tol = 1e-9) {
  const double lower = std::abs(a.theta - a.phi);
  const double sum = a.theta + a.phi;
  const double upper = sum <= kPi ? sum : kTwoPi - sum;
  return a.psi >= lower - tol && a.psi <= upper + tol;
}

/// Orthonormal basis of the conflict plane. e1 is along V_a; e2 is in-plane,
/// orthogonal to e1, and points to the hazard's side (<R, e2> >= 0).
struct PlaneBasis {
  Vec3 e1;
  Vec3 e2;

  Vec3 normal() const { return cross(e1, e2); }
};

inline PlaneBasis conflictPlaneBasis(const RelativeGeometry3D& g) {
  const Vec3 e1 = detail::unitOrThrow(g.aircraftVelocity, "aircraft velocity");
  const Vec3 eR = detail::unitOrThrow(g.losVector, "line-of-sight vector");

  auto rejection = [&](const Vec3& v) { return v - e1 * dot(v, e1); };

  Vec3 rej = rejection(eR);
  if (norm(rej) < kCollinearSinEpsilon) {
    // Collinear: every plane through V_a is equally valid, pick one deterministically.
    rej = rejection(Vec3{1.0, 0.0, 0.0});
    if (norm(rej) < kCollinearSinEpsilon) rej = rejection(Vec3{0.0, 1.0, 0.0});
  }
  return {e1, rej * (1.0 / norm(rej))};
}

/// Rotation-axis vector W_a of magnitude |u_a| * maxAccel whose induced
/// acceleration W_a x V_a lies in the conflict plane. u_a = -1 turns away from
/// the hazard, u_a = +1 turns toward it.
inline Vec3 liftPlanarControl(double ua, const RelativeGeometry3D& g, double maxAccel) {
  const PlaneBasis b = conflictPlaneBasis(g);
  return b.normal() * (ua * maxAccel);
}

/// Point-mass 3D encounter used to check the planar reduction.
struct Encounter3D {
  Vec3 aircraftPos;
  Vec3 aircraftVel;
  Vec3 hazardPos;
  Vec3 hazardVel;

  RelativeGeometry3D geometry() const { return {hazardPos - aircraftPos, aircraftVel, hazardVel}; }
  double range() const { return norm(hazardPos - aircraftPos); }
};

/// One RK4 step of dV_a/dt = W_a x V_a with W_a held constant over the step;
/// the hazard flies straight.
inline Encounter3D stepEncounter3D(const Encounter3D& e, const Vec3& wa, double dt) {
  struct Rate {
    Vec3 dPos;
    Vec3 dVel;
  };
  auto f = [&](const Vec3& vel) { return Rate{vel, cross(wa, vel)}; };

  const Rate k1 = f(e.aircraftVel);
  const Rate k2 = f(e.aircraftVel + k1.dVel * (0.5 * dt));
  const Rate k3 = f(e.aircraftVel + k2.dVel * (0.5 * dt));
  const Rate k4 = f(e.aircraftVel + k3.dVel * dt);

  Encounter3D out = e;
  out.aircraftPos += (k1.dPos + 2.0 * k2.dPos + 2.0 * k3.dPos + k4.dPos) * (dt / 6.0);
  out.aircraftVel += (k1.dVel + 2.0 * k2.dVel + 2.0 * k3.dVel + k4.dVel) * (dt / 6.0);
  out.hazardPos += e.hazardVel * dt;
  return out;
}

}  // namespace bearing_game
