#pragma once

// JSON scenario files. See README for the schema; unknown keys are rejected.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bearing_game/engine.hpp"
#include "bearing_game/errors.hpp"
#include "bearing_game/scenarios.hpp"
#include "bearing_game/strategies.hpp"

namespace bearing_game {

struct CustomGeometry {
  double vaKnots{};
  double speedRatio{};
  double intersectDeg{};
};

enum class HazardKind { NonResponsive, OptimalAgile, FiniteTurn, Stationary };

struct ScenarioSpec {
  std::optional<CaseId> caseId;
  std::optional<CustomGeometry> custom;
  double r0M{};
  HazardKind hazard = HazardKind::NonResponsive;
  double hazardTurnRate = 1.0;
  double pursuitGain = 5.0;
  AircraftStrategy::Kind strategy = AircraftStrategy::Kind::BearingOnly;
  TieBreak tieBreak = TieBreak::Left;
  double hysteresisRad = 0.02;
  double bankDeg = 60.0;
  double dt = 1e-3;
  std::optional<double> maxTime;
  std::string outputDir;
  bool siUnits = true;

  TestCase geometry() const {
    if (caseId) return testCase(*caseId);
    return {CaseId::H1, custom->vaKnots, custom->speedRatio, custom->intersectDeg, "custom"};
  }
  std::string label() const { return caseId ? toString(*caseId) : std::string("custom"); }
};

namespace detail {

inline const nlohmann::json& requireKey(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + key, "required key is missing");
  return j.at(key);
}

inline double numberAt(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline std::string stringAt(const nlohmann::json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

inline void rejectUnknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(path + key, "unknown key");
  }
}

}  // namespace detail

inline ScenarioSpec parseScenario(const nlohmann::json& j) {
  using detail::numberAt;
  using detail::stringAt;
  if (!j.is_object()) throw ConfigError("<root>", "scenario must be a JSON object");
  detail::rejectUnknown(j,
                        {"case_id", "custom", "r0_m", "hazard_behavior", "hazard_turn_rate", "pursuit_gain",
                         "strategy", "tie_break", "hysteresis_rad", "bank_deg", "dt", "max_time", "output"},
                        "");
  ScenarioSpec s;
  if (j.contains("case_id") == j.contains("custom")) {
    throw ConfigError("case_id", "exactly one of case_id or custom must be given");
  }
  if (j.contains("case_id")) s.caseId = parseCaseId(stringAt(j.at("case_id"), "case_id"));
  if (j.contains("custom")) {
    const auto& c = j.at("custom");
    if (!c.is_object()) throw ConfigError("custom", "expected an object");
    detail::rejectUnknown(c, {"va_knots", "speed_ratio", "intersect_deg"}, "custom.");
    CustomGeometry g;
    g.vaKnots = numberAt(detail::requireKey(c, "va_knots", "custom."), "custom.va_knots");
    g.speedRatio = numberAt(detail::requireKey(c, "speed_ratio", "custom."), "custom.speed_ratio");
    g.intersectDeg = numberAt(detail::requireKey(c, "intersect_deg", "custom."), "custom.intersect_deg");
    if (!(g.vaKnots > 0.0)) throw ConfigError("custom.va_knots", "must be positive");
    if (!(g.speedRatio > 0.0)) throw ConfigError("custom.speed_ratio", "must be positive");
    s.custom = g;
  }

  s.r0M = numberAt(detail::requireKey(j, "r0_m", ""), "r0_m");
  if (!(s.r0M > 0.0)) throw ConfigError("r0_m", "must be positive");

  if (j.contains("hazard_behavior")) {
    const std::string h = stringAt(j.at("hazard_behavior"), "hazard_behavior");
    if (h == "non_responsive") s.hazard = HazardKind::NonResponsive;
    else if (h == "optimal_agile") s.hazard = HazardKind::OptimalAgile;
    else if (h == "finite_turn") s.hazard = HazardKind::FiniteTurn;
    else if (h == "stationary") s.hazard = HazardKind::Stationary;
    else throw ConfigError("hazard_behavior", "expected non_responsive, optimal_agile, finite_turn or stationary");
  }
  if (j.contains("hazard_turn_rate")) {
    s.hazardTurnRate = numberAt(j.at("hazard_turn_rate"), "hazard_turn_rate");
    if (!(s.hazardTurnRate > 0.0)) throw ConfigError("hazard_turn_rate", "must be positive");
  }
  if (j.contains("pursuit_gain")) {
    s.pursuitGain = numberAt(j.at("pursuit_gain"), "pursuit_gain");
    if (!(s.pursuitGain > 0.0)) throw ConfigError("pursuit_gain", "must be positive");
  }
  if (j.contains("strategy")) {
    const std::string st = stringAt(j.at("strategy"), "strategy");
    if (st == "bearing_only") s.strategy = AircraftStrategy::Kind::BearingOnly;
    else if (st == "optimal_known_speed") s.strategy = AircraftStrategy::Kind::OptimalKnownSpeed;
    else throw ConfigError("strategy", "expected bearing_only or optimal_known_speed");
  }
  if (j.contains("tie_break")) {
    const std::string t = stringAt(j.at("tie_break"), "tie_break");
    if (t == "left") s.tieBreak = TieBreak::Left;
    else if (t == "right") s.tieBreak = TieBreak::Right;
    else throw ConfigError("tie_break", "expected left or right");
  }
  if (j.contains("hysteresis_rad")) {
    s.hysteresisRad = numberAt(j.at("hysteresis_rad"), "hysteresis_rad");
    if (!(s.hysteresisRad >= 0.0 && s.hysteresisRad <= 0.1)) throw ConfigError("hysteresis_rad", "must lie in [0, 0.1]");
  }
  if (j.contains("bank_deg")) {
    s.bankDeg = numberAt(j.at("bank_deg"), "bank_deg");
    if (!(s.bankDeg > 0.0 && s.bankDeg < 90.0)) throw ConfigError("bank_deg", "must lie in (0, 90)");
  }
  if (j.contains("dt")) {
    s.dt = numberAt(j.at("dt"), "dt");
    if (!(s.dt > 0.0)) throw ConfigError("dt", "must be positive");
  }
  if (j.contains("max_time")) {
    s.maxTime = numberAt(j.at("max_time"), "max_time");
    if (!(*s.maxTime > s.dt)) throw ConfigError("max_time", "must exceed dt");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    detail::rejectUnknown(o, {"dir", "units"}, "output.");
    if (o.contains("dir")) s.outputDir = stringAt(o.at("dir"), "output.dir");
    if (o.contains("units")) {
      const std::string u = stringAt(o.at("units"), "output.units");
      if (u == "si") s.siUnits = true;
      else if (u == "normalized") s.siUnits = false;
      else throw ConfigError("output.units", "expected si or normalized");
    }
  }
  return s;
}

inline ScenarioSpec loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parseScenario(j);
}

/// Everything needed to run one scenario, in normalised units.
struct ResolvedScenario {
  TestCase geometry;
  UnitSystem units;
  WorldState initial;
  GameConfig config;
  AircraftStrategy strategy;
  HazardBehavior hazard;
  SimOptions options;
};

inline ResolvedScenario resolve(const ScenarioSpec& s) {
  ResolvedScenario r;
  r.geometry = s.geometry();
  r.units = UnitSystem::fromKnots(r.geometry.vaKnots, s.bankDeg);
  r.initial = buildInitialConditions(r.geometry, s.r0M, r.units);
  const double heading = hazardHeadingFromIntersect(r.geometry.intersectAngleDeg);
  const double r0 = r.units.toNormalizedLength(s.r0M);
  r.config.hazardSpeed = r.geometry.speedRatio;
  r.config.stepSize = s.dt;
  r.config.maxTime = s.maxTime.value_or(defaultMaxTime(r.geometry.speedRatio, heading, r0));
  r.strategy.kind = s.strategy;
  r.strategy.knownHazardSpeed = r.geometry.speedRatio;
  r.strategy.tieBreak = s.tieBreak;
  r.strategy.hysteresisBand = s.hysteresisRad;
  switch (s.hazard) {
    case HazardKind::NonResponsive: r.hazard = NonResponsive{}; break;
    case HazardKind::OptimalAgile: r.hazard = OptimalAgile{}; break;
    case HazardKind::FiniteTurn: r.hazard = FiniteTurn{s.hazardTurnRate, s.pursuitGain}; break;
    case HazardKind::Stationary: r.hazard = Stationary{}; break;
  }
  r.options.nmacRadius = r.units.toNormalizedLength(kNmacRadiusM);
  r.options.recordTrajectory = true;
  return r;
}

}  // namespace bearing_game
