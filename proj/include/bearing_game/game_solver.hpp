#pragma once

// Closed-form retrograde solution of the planar miss-distance game.
//
// Optimal trajectories are generated backwards in retro time tau = T - t from
// terminal states on the lines of minimum range cos(theta) = -v_h. In a regular
// region the aircraft holds u_a = -sign(theta_T), the value gradient rotates at
// unit rate, and the hazard's relative heading varies linearly in tau. The
// resulting trajectory field, barrier curves and value function all come from
// the same closed form.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bearing_game/errors.hpp"
#include "bearing_game/kinematics.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

/// Which line of minimum range a trajectory ends on. Right: theta_T > 0 and the
/// aircraft turns left (u_a = -1). Left is the mirror image.
enum class Family { Right, Left };

inline double familySign(Family f) { return f == Family::Right ? 1.0 : -1.0; }

/// Bearing of the line of minimum range, acos(-v_h), for 0 <= v_h <= 1.
inline double terminalBearing(double vh) {
  if (vh > 1.0) throw UndefinedTerminationLine("no line of minimum range for v_h > 1");
  if (!(vh >= 0.0)) throw DomainError("hazard speed must be non-negative");
  return std::acos(-vh);
}

namespace detail {

/// Closed-form retro solution for one family at arbitrary terminal range.
struct RetroModel {
  double vh{};
  double thetaT{};  // signed terminal bearing
  double ua{};      // constant aircraft control along the family
  double uhT{};     // terminal relative hazard heading (unwrapped: thetaT + pi)

  static RetroModel of(double vh, Family f) {
    const double thetaT = familySign(f) * terminalBearing(vh);
    return {vh, thetaT, -familySign(f), thetaT + kPi};
  }

  double heading(double tau) const { return uhT + tau * ua; }

  Vec2 terminalPoint(double rT) const { return {rT * std::sin(thetaT), rT * std::cos(thetaT)}; }

  Vec2 state(double rT, double tau) const {
    const Vec2 p = terminalPoint(rT);
    const double c = std::cos(tau);
    const double s = std::sin(tau);
    const double uh = heading(tau);
    return {ua * (1.0 - c) + p.x * c + ua * p.y * s - vh * tau * std::sin(uh),
            (1.0 - ua * p.x) * s + p.y * c - vh * tau * std::cos(uh)};
  }

  /// d(state)/d(tau), i.e. the negated forward-time velocity.
  Vec2 stateRate(const Vec2& xy, double tau) const {
    const double uh = heading(tau);
    return {ua * xy.y - vh * std::sin(uh), 1.0 - ua * xy.x - vh * std::cos(uh)};
  }

  /// d(state)/d(rT).
  Vec2 rangeSensitivity(double tau) const {
    const double c = std::cos(tau);
    const double s = std::sin(tau);
    const double st = std::sin(thetaT);
    const double ct = std::cos(thetaT);
    return {c * st + ua * s * ct, -ua * s * st + c * ct};
  }

  Vec2 adjoint(double tau) const {
    const double uh = heading(tau);
    return {-std::sin(uh), -std::cos(uh)};
  }

  double switching(double rT, double tau) const {
    const Vec2 p = state(rT, tau);
    const Vec2 v = adjoint(tau);
    return v.y * p.x - v.x * p.y;
  }
};

/// First tau in (0, tauMax] where pred(tau) becomes false, refined by bisection.
template <class Pred>
double firstFailure(Pred&& pred, double scanStep, double tauMax) {
  double lo = 0.0;
  for (double tau = scanStep; tau <= tauMax + 0.5 * scanStep; tau += scanStep) {
    if (!pred(tau)) {
      double hi = tau;
      for (int i = 0; i < 80 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    lo = tau;
  }
  return std::numeric_limits<double>::infinity();
}

inline double xCrossingTau(const RetroModel& m, double rT) {
  const double sign = m.thetaT >= 0.0 ? 1.0 : -1.0;
  return firstFailure([&](double tau) { return sign * m.state(rT, tau).x > 0.0; }, 1e-3, 4.0 * kPi);
}

inline double switchingTau(const RetroModel& m, double rT) {
  return firstFailure([&](double tau) { return m.ua * m.switching(rT, tau) > 0.0; }, 1e-3, 4.0 * kPi);
}

}  // namespace detail

/// Terminal state on a line of minimum range together with the terminal
/// controls and value gradient.
struct TerminalCondition {
  double hazardSpeed{};
  double rT{};
  double thetaT{};
  double uaTerminal{};
  double uhTerminal{};  // wrapped to (-pi, pi]
  double VxT{};
  double VyT{};
  Family family = Family::Right;
  /// First tau at which the switching function changes sign (infinite if never).
  double switchTau = std::numeric_limits<double>::infinity();

  static TerminalCondition make(double vh, double rT, Family family) {
    if (!(rT >= 0.0)) throw DomainError("terminal range must be non-negative");
    const auto m = detail::RetroModel::of(vh, family);
    TerminalCondition tc;
    tc.hazardSpeed = vh;
    tc.rT = rT;
    tc.thetaT = m.thetaT;
    tc.uaTerminal = m.ua;
    tc.uhTerminal = wrapAngle(m.uhT);
    tc.VxT = std::sin(m.thetaT);
    tc.VyT = std::cos(m.thetaT);
    tc.family = family;
    tc.switchTau = detail::switchingTau(m, rT);
    return tc;
  }

  detail::RetroModel model() const { return detail::RetroModel::of(hazardSpeed, family); }
  PlanarState point() const { return PlanarState::fromPolar(rT, thetaT); }
};

struct AdjointValue {
  double Vx{};
  double Vy{};
};

inline AdjointValue retroAdjoint(const TerminalCondition& tc, double tau) {
  const double mu = std::hypot(tc.VxT, tc.VyT);
  const double uh = tc.uhTerminal + tau * tc.uaTerminal;
  return {-mu * std::sin(uh), -mu * std::cos(uh)};
}

/// Optimal relative hazard heading at retro time tau (wrapped).
inline double retroHazardHeading(const TerminalCondition& tc, double tau) {
  return wrapAngle(tc.uhTerminal + tau * tc.uaTerminal);
}

/// Closed-form state without the regular-region check.
inline PlanarState retroStateUnchecked(const TerminalCondition& tc, double tau) {
  const Vec2 p = tc.model().state(tc.rT, tau);
  return {p.x, p.y};
}

inline PlanarState retroState(const TerminalCondition& tc, double tau) {
  if (!(tau >= 0.0)) throw DomainError("retro time must be non-negative");
  if (tau > tc.switchTau) {
    throw OutsideRegularRegion("switching function changes sign at tau = " + std::to_string(tc.switchTau));
  }
  return retroStateUnchecked(tc, tau);
}

/// sigma = V_y x - V_x y along the retro trajectory.
inline double switchingFunction(const TerminalCondition& tc, double tau) {
  return tc.model().switching(tc.rT, tau);
}

/// Retro time at which the trajectory reaches the y-axis (singular arc).
inline double yAxisCrossingTau(const TerminalCondition& tc) { return detail::xCrossingTau(tc.model(), tc.rT); }

struct RetroSample {
  double tau{};
  double x{};
  double y{};
  double Vx{};
  double Vy{};
  double uh{};
  double ua{};
};

struct RetroTrajectory {
  std::vector<RetroSample> samples;
  TerminalCondition terminal;
};

struct FieldOptions {
  double tauMax = 2.0 * kPi;
  double tauStep = 1e-3;
};

inline RetroSample retroSample(const TerminalCondition& tc, double tau) {
  const PlanarState p = retroStateUnchecked(tc, tau);
  const AdjointValue v = retroAdjoint(tc, tau);
  return {tau, p.x, p.y, v.Vx, v.Vy, retroHazardHeading(tc, tau), tc.uaTerminal};
}

/// Retro trajectory from one terminal condition, truncated at the first of
/// tauMax, the switching-function sign change, and the y-axis crossing.
inline RetroTrajectory retroTrajectory(const TerminalCondition& tc, const FieldOptions& opt) {
  if (!(opt.tauStep > 0.0)) throw DomainError("tauStep must be positive");
  const double tauEnd = std::min({opt.tauMax, tc.switchTau, yAxisCrossingTau(tc)});
  RetroTrajectory out{{}, tc};
  const auto n = static_cast<std::size_t>(std::floor(tauEnd / opt.tauStep));
  out.samples.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) out.samples.push_back(retroSample(tc, static_cast<double>(i) * opt.tauStep));
  if (tauEnd - static_cast<double>(n) * opt.tauStep > 1e-12) out.samples.push_back(retroSample(tc, tauEnd));
  return out;
}

/// n terminal ranges geometrically spaced on [lo, hi].
inline std::vector<double> geometricRanges(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("geometricRanges needs 0 < lo < hi and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
  out.back() = hi;
  return out;
}

/// Both mirror families of optimal trajectories ending on the lines of minimum range.
inline std::vector<RetroTrajectory> trajectoryField(double vh, std::span<const double> rTs,
                                                    const FieldOptions& opt = {}) {
  if (!(vh > 0.0 && vh <= 1.0)) throw DomainError("trajectory field needs 0 < v_h <= 1");
  std::vector<RetroTrajectory> out;
  out.reserve(2 * rTs.size());
  for (const Family f : {Family::Right, Family::Left}) {
    for (const double rT : rTs) out.push_back(retroTrajectory(TerminalCondition::make(vh, rT, f), opt));
  }
  return out;
}

namespace detail {

inline bool insidePolygon(std::span<const Vec2> poly, const Vec2& p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xCross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xCross) inside = !inside;
    }
  }
  return inside;
}

inline double segmentDistance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + ab * t));
}

inline std::vector<Vec2> branchPoints(double vh, double rho, Family f, double tauStep) {
  const auto tc = TerminalCondition::make(vh, rho, f);
  FieldOptions opt;
  opt.tauStep = tauStep;
  opt.tauMax = std::numeric_limits<double>::infinity();
  const auto traj = retroTrajectory(tc, opt);
  std::vector<Vec2> pts;
  pts.reserve(traj.samples.size());
  for (const auto& s : traj.samples) pts.push_back({s.x, s.y});
  return pts;
}

}  // namespace detail

/// Barrier separating states with miss-distance below rho from those above.
/// Each branch runs from its terminal point (rho, +-acos(-v_h)) to the y-axis.
struct BarrierCurve {
  double vh{};
  double rho{};
  std::vector<Vec2> leftBranch;
  std::vector<Vec2> rightBranch;

  double terminalBearing() const { return bearing_game::terminalBearing(vh); }

  /// Closed boundary: origin, right branch, left branch reversed.
  std::vector<Vec2> polygon() const {
    std::vector<Vec2> poly;
    poly.reserve(leftBranch.size() + rightBranch.size() + 1);
    poly.push_back({0.0, 0.0});
    poly.insert(poly.end(), rightBranch.begin(), rightBranch.end());
    poly.insert(poly.end(), leftBranch.rbegin(), leftBranch.rend());
    return poly;
  }

  /// True when the state's optimal-play miss-distance is below rho: inside the
  /// closed barrier, or already past the line of minimum range with r < rho.
  bool contains(const PlanarState& s) const {
    if (std::abs(s.bearing()) >= terminalBearing()) return s.range() < rho;
    const auto poly = polygon();
    return detail::insidePolygon(poly, {s.x, s.y});
  }

  /// Distance to the set boundary: both branches plus the rear arc r = rho.
  double distanceToBoundary(const PlanarState& s) const {
    const Vec2 p{s.x, s.y};
    double d = std::numeric_limits<double>::infinity();
    for (const auto* branch : {&leftBranch, &rightBranch}) {
      for (std::size_t i = 1; i < branch->size(); ++i) {
        d = std::min(d, detail::segmentDistance(p, (*branch)[i - 1], (*branch)[i]));
      }
    }
    const double thT = terminalBearing();
    const double th = s.bearing();
    if (std::abs(th) >= thT) {
      d = std::min(d, std::abs(s.range() - rho));
    } else {
      for (const double sgn : {1.0, -1.0}) {
        d = std::min(d, norm(p - Vec2{rho * std::sin(sgn * thT), rho * std::cos(sgn * thT)}));
      }
    }
    return d;
  }
};

namespace detail {

inline BarrierCurve buildBarrier(double vh, double rho, double tauStep) {
  return {vh, rho, branchPoints(vh, rho, Family::Left, tauStep), branchPoints(vh, rho, Family::Right, tauStep)};
}

}  // namespace detail

inline BarrierCurve barrier(double vh, double rho, double tauStep = 1e-3) {
  if (!(vh > 0.0 && vh < 1.0)) throw DomainError("barrier needs 0 < v_h < 1");
  if (!(rho > 0.0)) throw DomainError("barrier needs rho > 0");
  return detail::buildBarrier(vh, rho, tauStep);
}

/// Where a planar state sits in the solved game.
struct FieldLocation {
  enum class Region {
    Regular,      // on a regular-region optimal trajectory (family, rT, tau valid)
    SingularArc,  // on x = 0 ahead of the aircraft; rT valid
    Terminal,     // at or past the line of minimum range
    Capture,      // inside the zero-miss region
  };
  Region region = Region::Regular;
  Family family = Family::Right;
  double rT{};
  double tau{};
};

/// Inverse of the trajectory field: finds the optimal trajectory (terminal
/// range, retro time) through a state. Seeds from the nearest precomputed field
/// sample and refines with Newton's method on the closed form.
class FieldInverse {
 public:
  explicit FieldInverse(double vh, double maxTerminalRange = 1e3)
      : vh_(vh), thetaT_(bearing_game::terminalBearing(vh)), right_(detail::RetroModel::of(vh, Family::Right)) {
    if (!(vh > 0.0)) throw DomainError("field inverse needs v_h > 0");
    capture_ = detail::buildBarrier(vh, 0.0, 2e-3);
    for (const double rT : geometricRanges(1e-3, maxTerminalRange, 80)) {
      const double tauEnd = detail::xCrossingTau(right_, rT);
      constexpr int kTauSamples = 48;
      for (int k = 1; k <= kTauSamples; ++k) {
        const double tau = tauEnd * k / (kTauSamples + 1.0);
        seeds_.push_back({right_.state(rT, tau), rT, tau});
      }
    }
  }

  double hazardSpeed() const { return vh_; }
  double terminalBearing() const { return thetaT_; }
  const BarrierCurve& captureBoundary() const { return capture_; }

  /// Throws OutsideFieldCoverage when no valid trajectory passes through s.
  FieldLocation locate(const PlanarState& s, const FieldLocation* warm = nullptr) const {
    using Region = FieldLocation::Region;
    const double r = s.range();
    if (r == 0.0) return {Region::Capture, Family::Right, 0.0, 0.0};
    if (std::abs(s.bearing()) >= thetaT_) return {Region::Terminal, Family::Right, r, 0.0};
    if (capture_.contains(s)) return {Region::Capture, Family::Right, 0.0, 0.0};

    const Family family = s.x >= 0.0 ? Family::Right : Family::Left;
    const Vec2 target{std::abs(s.x), s.y};

    std::optional<std::array<double, 2>> solved;
    if (warm && warm->region == Region::Regular && warm->family == family) {
      solved = newton(target, warm->rT, warm->tau);
    }
    if (!solved) {
      for (const Seed* seed : nearestSeeds(target)) {
        solved = newton(target, seed->rT, seed->tau);
        if (solved) break;
      }
    }
    if (!solved) throw OutsideFieldCoverage("no optimal trajectory found through the state");

    const double scale = std::max(1.0, r);
    const Region region = std::abs(s.x) <= 1e-12 * scale ? Region::SingularArc : Region::Regular;
    return {region, family, (*solved)[0], (*solved)[1]};
  }

  /// Miss-distance under mutual optimal play.
  double value(const PlanarState& s) const {
    const FieldLocation loc = locate(s);
    switch (loc.region) {
      case FieldLocation::Region::Capture: return 0.0;
      case FieldLocation::Region::Terminal: return s.range();
      default: return loc.rT;
    }
  }

  /// Optimal relative hazard heading implied by a location. Inside the capture
  /// region the hazard takes the earliest intercept of the aircraft's optimal
  /// turn away from it.
  double hazardHeading(const PlanarState& s, const FieldLocation& loc) const;

 private:
  struct Seed {
    Vec2 xy;
    double rT;
    double tau;
  };

  std::vector<const Seed*> nearestSeeds(const Vec2& target) const {
    constexpr std::size_t kCandidates = 4;
    std::vector<std::pair<double, const Seed*>> best;
    for (const auto& seed : seeds_) {
      const Vec2 d = seed.xy - target;
      const double d2 = dot(d, d);
      if (best.size() < kCandidates || d2 < best.back().first) {
        best.emplace_back(d2, &seed);
        std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (best.size() > kCandidates) best.pop_back();
      }
    }
    std::vector<const Seed*> out;
    for (const auto& b : best) out.push_back(b.second);
    return out;
  }

  /// Solves state(rT, tau) = target on the right family.
  std::optional<std::array<double, 2>> newton(const Vec2& target, double rT, double tau) const {
    const double scale = std::max(1.0, norm(target));
    for (int it = 0; it < 60; ++it) {
      const Vec2 p = right_.state(rT, tau);
      const Vec2 f = p - target;
      if (norm(f) < 1e-12 * scale) return validate(target, rT, tau);
      const Vec2 jr = right_.rangeSensitivity(tau);
      const Vec2 jt = right_.stateRate(p, tau);
      const double det = jr.x * jt.y - jr.y * jt.x;
      if (std::abs(det) < 1e-14) return std::nullopt;
      double dr = -(f.x * jt.y - f.y * jt.x) / det;
      double dt = -(jr.x * f.y - jr.y * f.x) / det;
      const double shrink = std::max({1.0, std::abs(dt) / 0.25, std::abs(dr) / (0.5 * (rT + 0.5))});
      dr /= shrink;
      dt /= shrink;
      rT += dr;
      tau += dt;
      if (tau < 0.0) tau = 0.5 * (tau - dt);
    }
    return std::nullopt;
  }

  std::optional<std::array<double, 2>> validate(const Vec2& target, double rT, double tau) const {
    if (rT < -1e-9 || tau < -1e-9) return std::nullopt;
    rT = std::max(rT, 0.0);
    tau = std::max(tau, 0.0);
    if (tau > right_.thetaT * 2.0) return std::nullopt;  // beyond any regular region
    // The trajectory must stay on the right side between the terminal point and the state.
    constexpr int kChecks = 16;
    for (int k = 1; k < kChecks; ++k) {
      if (right_.state(rT, tau * k / kChecks).x <= 0.0) return std::nullopt;
    }
    (void)target;
    return std::array<double, 2>{rT, tau};
  }

  double vh_;
  double thetaT_;
  detail::RetroModel right_;
  BarrierCurve capture_;
  std::vector<Seed> seeds_;
};

/// Relative heading of a straight hazard path that meets the aircraft on its
/// current constant turn ua at the earliest possible time; empty when the
/// hazard cannot reach the turn circle within one revolution.
inline std::optional<double> interceptHeading(const PlanarState& s, double vh, double ua) {
  auto gap = [&](double t) {
    const Vec2 p{ua * (1.0 - std::cos(t)), std::sin(t)};
    return norm(p - Vec2{s.x, s.y}) - vh * t;
  };
  const double tEnd = detail::firstFailure([&](double t) { return gap(t) > 0.0; }, 1e-2, kTwoPi);
  if (!std::isfinite(tEnd)) return std::nullopt;
  const Vec2 d = Vec2{ua * (1.0 - std::cos(tEnd)), std::sin(tEnd)} - Vec2{s.x, s.y};
  if (!(norm(d) > 0.0)) return wrapAngle(s.bearing() + kPi);
  return std::atan2(d.x, d.y);
}

inline double FieldInverse::hazardHeading(const PlanarState& s, const FieldLocation& loc) const {
  switch (loc.region) {
    case FieldLocation::Region::Regular:
      return familySign(loc.family) * wrapAngle(right_.heading(loc.tau));
    case FieldLocation::Region::SingularArc:
      return kPi;
    case FieldLocation::Region::Capture: {
      const double ua = s.x > 0.0 ? -1.0 : (s.x < 0.0 ? 1.0 : -1.0);
      if (const auto h = interceptHeading(s, vh_, ua)) return *h;
      return wrapAngle(s.bearing() + kPi);
    }
    case FieldLocation::Region::Terminal:
      break;
  }
  return wrapAngle(s.bearing() + kPi);
}

/// Miss-distance under mutual optimal play from s. Zero for v_h > 1.
inline double valueFunction(const PlanarState& s, double vh) {
  if (vh > 1.0) return 0.0;
  if (!(vh > 0.0)) throw DomainError("valueFunction needs v_h > 0");
  return FieldInverse(vh).value(s);
}

}  // namespace bearing_game
