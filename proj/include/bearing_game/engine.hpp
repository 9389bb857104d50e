#pragma once

// Closed-loop forward simulation with event detection.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "bearing_game/errors.hpp"
#include "bearing_game/kinematics.hpp"
#include "bearing_game/strategies.hpp"
#include "bearing_game/vec.hpp"

namespace bearing_game {

enum class EventKind { MinRange, NMAC, CaptureCross, Timeout, Collision };

inline const char* toString(EventKind k) {
  switch (k) {
    case EventKind::MinRange: return "MinRange";
    case EventKind::NMAC: return "NMAC";
    case EventKind::CaptureCross: return "CaptureCross";
    case EventKind::Timeout: return "Timeout";
    case EventKind::Collision: return "Collision";
  }
  return "?";
}

struct Event {
  EventKind kind{};
  double time{};
  PlanarState state;
};

struct TrajectorySample {
  double t{};
  WorldState world;
  PlanarState relative;
  double ua{};
  /// Relative heading u_h for heading-commanded hazards, turn command for finite-turn ones.
  double hazardCommand{};
  double range{};
  double rangeRate{};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

struct SimOptions {
  /// Normalised NMAC radius; 0 disables the event.
  double nmacRadius = 0.0;
  double collisionEpsilon = 1e-3;
  bool recordTrajectory = false;
  /// Stop as soon as the miss-distance is resolved instead of running to maxTime.
  bool stopAfterMiss = false;
};

struct SimResult {
  Trajectory trajectory;
  /// First local minimum of range (normalised).
  double missDistance{};
  double missTime{};
  double terminalTheta{};
  /// Relative hazard heading at the miss.
  double terminalHazardHeading{};
  /// Smallest range over the whole run, refined the same way.
  double globalMinRange{};
  double globalMinTime{};
  bool initiallyClosing = true;
  bool missResolved = false;
  std::vector<Event> events;

  bool has(EventKind k) const {
    return std::any_of(events.begin(), events.end(), [k](const Event& e) { return e.kind == k; });
  }
};

namespace detail {

struct StepRecord {
  double r;
  double rDot;
  double theta;
  double uh;  // relative hazard velocity heading
  PlanarState rel;
};

struct QuadraticMin {
  double offset;  // in samples, relative to the centre index
  double value;
};

/// Vertex of the parabola through (-1, fm), (0, f0), (1, fp).
inline QuadraticMin parabolaVertex(double fm, double f0, double fp) {
  const double curv = fm - 2.0 * f0 + fp;
  if (!(curv > 0.0)) return {0.0, f0};
  const double s = std::clamp(0.5 * (fm - fp) / curv, -1.0, 1.0);
  return {s, f0 + 0.5 * (fp - fm) * s + 0.5 * curv * s * s};
}

inline double lerpAngle(double a, double b, double s) { return wrapAngle(a + s * wrapAngle(b - a)); }

}  // namespace detail

/// Runs a closed loop with arbitrary policies:
///   aircraftPolicy(t, world, relative) -> u_a
///   hazardPolicy(t, world, relative) -> HazardCommand
template <class AircraftPolicy, class HazardPolicy>
SimResult simulateWith(const WorldState& initial, AircraftPolicy&& aircraftPolicy, HazardPolicy&& hazardPolicy,
                       const GameConfig& cfg, const SimOptions& opt = {}) {
  cfg.validate();
  const PlanarState rel0 = relativeState(initial);
  if (!(rel0.range() > 0.0) || !std::isfinite(rel0.range())) {
    throw InvalidInitialState("initial range must be positive and finite");
  }

  const double dt = cfg.stepSize;
  const auto steps = static_cast<std::size_t>(std::llround(cfg.maxTime / dt));
  SimResult res;
  std::vector<detail::StepRecord> rec;
  rec.reserve(steps + 1);
  if (opt.recordTrajectory) res.trajectory.samples.reserve(steps + 1);

  WorldState w = initial;
  std::ptrdiff_t missIndex = -1;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const PlanarState rel = relativeState(w);
    const double r = rel.range();
    const double ua = std::clamp(static_cast<double>(aircraftPolicy(t, w, rel)), -1.0, 1.0);
    const HazardCommand hc = hazardPolicy(t, w, rel);
    const double hazardHeading = hc.mode == HazardCommand::Mode::Heading ? hc.value : w.hazardHeading;
    const double uh = wrapAngle(hazardHeading - w.aircraftHeading);
    const double rDot = r > 0.0 ? planarDerivatives(rel, ua, uh, cfg.hazardSpeed).rDot
                                : -1.0 - cfg.hazardSpeed;
    rec.push_back({r, rDot, rel.bearing(), uh, rel});
    if (opt.recordTrajectory) {
      const double cmd = hc.mode == HazardCommand::Mode::Heading ? uh : hc.value;
      res.trajectory.samples.push_back({t, w, rel, ua, cmd, r, rDot});
    }

    // first local minimum of range, confirmed once range rises again
    if (missIndex < 0 && k >= 2 && rec[k - 1].r <= rec[k - 2].r && rec[k].r > rec[k - 1].r) {
      missIndex = static_cast<std::ptrdiff_t>(k - 1);
      if (opt.stopAfterMiss) break;
    }
    if (k == steps) break;
    w = stepRK4(w, {ua, hc}, cfg);
  }

  const auto n = rec.size();
  auto refine = [&](std::size_t m) {
    if (m == 0 || m + 1 >= n) return detail::QuadraticMin{0.0, rec[m].r};
    const auto q = detail::parabolaVertex(rec[m - 1].r * rec[m - 1].r, rec[m].r * rec[m].r,
                                          rec[m + 1].r * rec[m + 1].r);
    return detail::QuadraticMin{q.offset, std::sqrt(std::max(q.value, 0.0))};
  };
  auto interpolate = [&](std::size_t m, double s) {
    const std::size_t other = s >= 0.0 ? std::min(m + 1, n - 1) : (m > 0 ? m - 1 : 0);
    const double frac = std::abs(s);
    return std::pair{detail::lerpAngle(rec[m].theta, rec[other].theta, frac),
                     detail::lerpAngle(rec[m].uh, rec[other].uh, frac)};
  };
  auto stateAt = [&](std::size_t m, double s, double range) {
    const double theta = interpolate(m, s).first;
    return PlanarState::fromPolar(range, theta);
  };

  // miss-distance: the payoff, i.e. range where it first stops decreasing
  res.initiallyClosing = rec[0].rDot < 0.0;
  if (!res.initiallyClosing) {
    res.missDistance = rec[0].r;
    res.missTime = 0.0;
    res.terminalTheta = rec[0].theta;
    res.terminalHazardHeading = rec[0].uh;
    res.missResolved = true;
    res.events.push_back({EventKind::MinRange, 0.0, rec[0].rel});
  } else if (missIndex >= 0) {
    const auto m = static_cast<std::size_t>(missIndex);
    const auto q = refine(m);
    const auto [th, uh] = interpolate(m, q.offset);
    res.missDistance = q.value;
    res.missTime = (static_cast<double>(m) + q.offset) * dt;
    res.terminalTheta = th;
    res.terminalHazardHeading = uh;
    res.missResolved = true;
    res.events.push_back({EventKind::MinRange, res.missTime, PlanarState::fromPolar(q.value, th)});
  } else {
    res.missDistance = rec.back().r;
    res.missTime = static_cast<double>(n - 1) * dt;
    res.terminalTheta = rec.back().theta;
    res.terminalHazardHeading = rec.back().uh;
    res.events.push_back({EventKind::Timeout, res.missTime, rec.back().rel});
  }

  // global minimum
  std::size_t g = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (rec[k].r < rec[g].r) g = k;
  }
  const auto qg = refine(g);
  res.globalMinRange = qg.value;
  res.globalMinTime = (static_cast<double>(g) + qg.offset) * dt;
  if (res.globalMinRange < opt.collisionEpsilon) {
    res.events.push_back({EventKind::Collision, res.globalMinTime, stateAt(g, qg.offset, qg.value)});
  }

  // threshold crossings, linearly interpolated between samples
  auto firstBelow = [&](double radius, EventKind kind) {
    if (!(radius > 0.0)) return;
    for (std::size_t k = 0; k < n; ++k) {
      if (rec[k].r < radius) {
        double t = static_cast<double>(k) * dt;
        if (k > 0) t -= dt * (radius - rec[k].r) / (rec[k - 1].r - rec[k].r);
        res.events.push_back({kind, t, rec[k].rel});
        return;
      }
    }
    // the refined minimum can dip below a radius that no sample did
    if (res.globalMinRange < radius) res.events.push_back({kind, res.globalMinTime, stateAt(g, qg.offset, qg.value)});
  };
  firstBelow(opt.nmacRadius, EventKind::NMAC);
  firstBelow(cfg.captureRadius, EventKind::CaptureCross);

  std::stable_sort(res.events.begin(), res.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  return res;
}

/// Aircraft side of a closed loop built from a strategy. OptimalKnownSpeed
/// latches termination and falls back to bearing-only when v_h > 1.
class AircraftController {
 public:
  explicit AircraftController(AircraftStrategy s) : strat_(s) {
    strat_.validate();
    if (strat_.kind == AircraftStrategy::Kind::OptimalKnownSpeed && strat_.knownHazardSpeed > 1.0) {
      fallback_ = true;
    }
  }

  double operator()(double, const WorldState&, const PlanarState& rel) {
    const double theta = rel.bearing();
    if (strat_.kind == AircraftStrategy::Kind::BearingOnly || fallback_) return bearingOnlyCommand(theta, strat_);
    if (terminated_) return 0.0;
    const auto cmd = optimalAircraftCommand(theta, strat_.knownHazardSpeed, strat_);
    terminated_ = cmd.terminated;
    return cmd.ua;
  }

  bool usedFallback() const { return fallback_; }

 private:
  AircraftStrategy strat_;
  bool fallback_ = false;
  bool terminated_ = false;
};

/// Hazard side of a closed loop built from a behaviour.
class HazardController {
 public:
  HazardController(const HazardBehavior& h, double vh, std::shared_ptr<const FieldInverse> field = nullptr)
      : behavior_(h) {
    validate(h);
    if (std::holds_alternative<OptimalAgile>(h)) {
      planner_.emplace(field ? AgileHazardPlanner(std::move(field)) : AgileHazardPlanner(vh));
    }
  }

  HazardCommand operator()(double, const WorldState& w, const PlanarState& rel) {
    if (planner_) return HazardCommand::heading(wrapAngle(w.aircraftHeading + planner_->heading(rel)));
    if (const auto* nr = std::get_if<NonResponsive>(&behavior_)) {
      return nr->fixedHeading ? HazardCommand::heading(*nr->fixedHeading) : HazardCommand::turn(0.0);
    }
    if (const auto* ft = std::get_if<FiniteTurn>(&behavior_)) return HazardCommand::turn(finiteTurnPursuitCommand(w, ft->gain));
    return HazardCommand::turn(0.0);
  }

 private:
  HazardBehavior behavior_;
  std::optional<AgileHazardPlanner> planner_;
};

/// Game configuration actually simulated for a behaviour: a stationary hazard
/// has zero speed and a finite-turn hazard brings its own turn rate.
inline GameConfig effectiveConfig(const HazardBehavior& h, GameConfig cfg) {
  if (std::holds_alternative<Stationary>(h)) cfg.hazardSpeed = 0.0;
  if (const auto* ft = std::get_if<FiniteTurn>(&h)) cfg.hazardTurnRate = ft->turnRate;
  return cfg;
}

inline SimResult simulate(const WorldState& initial, const AircraftStrategy& strat, const HazardBehavior& hazard,
                          const GameConfig& cfg, const SimOptions& opt = {},
                          std::shared_ptr<const FieldInverse> field = nullptr) {
  const GameConfig eff = effectiveConfig(hazard, cfg);
  AircraftController aircraft(strat);
  HazardController hz(hazard, eff.hazardSpeed, std::move(field));
  return simulateWith(initial, aircraft, hz, eff, opt);
}

/// World state with the aircraft at the origin heading +y and the hazard at
/// relative position s with relative heading uh.
inline WorldState worldFromRelative(const PlanarState& s, double uh = kPi) {
  return {{0.0, 0.0}, 0.0, {s.x, s.y}, wrapAngle(uh)};
}

/// Maps fn over [0, n) on up to `jobs` threads; results keep index order.
template <class Fn>
auto parallelMap(std::size_t n, Fn&& fn, unsigned jobs) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) slots[i].emplace(fn(i));
  };
  std::vector<std::future<void>> futures;
  for (unsigned j = 1; j < jobs; ++j) futures.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futures) f.get();
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline unsigned defaultJobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct SweepPoint {
  double r0{};
  SimResult result;
};

/// Independent simulations for each initial range; scenario(r0) returns the
/// initial state, configuration and options for that range.
template <class ScenarioFn>
std::vector<SweepPoint> sweep(const std::vector<double>& initialRanges, ScenarioFn&& scenario,
                              const AircraftStrategy& strat, const HazardBehavior& hazard,
                              unsigned jobs = defaultJobs()) {
  if (initialRanges.empty()) throw DomainError("sweep needs at least one initial range");
  return parallelMap(
      initialRanges.size(),
      [&](std::size_t i) {
        const auto [w, cfg, opt] = scenario(initialRanges[i]);
        return SweepPoint{initialRanges[i], simulate(w, strat, hazard, cfg, opt)};
      },
      jobs);
}

/// Length and time scales used when writing trajectories.
struct OutputScale {
  double length = 1.0;
  double time = 1.0;
};

inline void writeTrajectoryCsv(std::ostream& os, const Trajectory& tr, const OutputScale& sc = {}) {
  os << "t,x_a,y_a,psi_a,x_h,y_h,theta_h,r,r_dot,theta,u_a,u_h\n";
  char buf[512];
  const double L = sc.length;
  const double speed = sc.length / sc.time;
  for (const auto& s : tr.samples) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  s.t * sc.time, s.world.aircraftPos.x * L, s.world.aircraftPos.y * L, s.world.aircraftHeading,
                  s.world.hazardPos.x * L, s.world.hazardPos.y * L, s.world.hazardHeading, s.range * L,
                  s.rangeRate * speed, s.relative.bearing(), s.ua, s.hazardCommand);
    os << buf;
  }
}

}  // namespace bearing_game
