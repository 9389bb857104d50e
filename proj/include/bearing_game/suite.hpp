#pragma once

// Regression suite: every catalogue case at each initial range, flown
// with the bearing-only strategy against a non-responsive hazard.

#include <cmath>
#include <string>
#include <vector>

#include "bearing_game/engine.hpp"
#include "bearing_game/report.hpp"
#include "bearing_game/scenarios.hpp"
#include "bearing_game/strategies.hpp"

namespace bearing_game {

struct SuiteOptions {
  double dt = 1e-3;
  double bankDeg = 60.0;
  double hysteresisBand = 0.02;
  unsigned jobs = defaultJobs();
};

struct SuiteRun {
  CaseId id{};
  double r0M{};
  double missM{};
  double missNormalized{};
  double missTimeS{};
  double globalMinM{};
  bool nmac{};
  bool collision{};
};

/// Setup for one suite run: normalised initial state, config and options.
struct SuiteSetup {
  WorldState initial;
  GameConfig config;
  SimOptions options;
  UnitSystem units;
};

inline SuiteSetup suiteSetup(const TestCase& tc, double r0M, const SuiteOptions& opt) {
  SuiteSetup s;
  s.units = UnitSystem::fromKnots(tc.vaKnots, opt.bankDeg);
  s.initial = buildInitialConditions(tc, r0M, s.units);
  const double r0 = s.units.toNormalizedLength(r0M);
  s.config.hazardSpeed = tc.speedRatio;
  s.config.stepSize = opt.dt;
  s.config.maxTime = defaultMaxTime(tc.speedRatio, hazardHeadingFromIntersect(tc.intersectAngleDeg), r0);
  s.options.nmacRadius = s.units.toNormalizedLength(kNmacRadiusM);
  return s;
}

inline SuiteRun runSuiteCase(CaseId id, double r0M, const SuiteOptions& opt) {
  const TestCase& tc = testCase(id);
  const SuiteSetup s = suiteSetup(tc, r0M, opt);
  const SimResult res =
      simulate(s.initial, AircraftStrategy::bearingOnly(opt.hysteresisBand), NonResponsive{}, s.config, s.options);
  const double L = s.units.lengthScale();
  return {id,
          r0M,
          res.missDistance * L,
          res.missDistance,
          s.units.toSITime(res.missTime),
          res.globalMinRange * L,
          res.has(EventKind::NMAC),
          res.has(EventKind::Collision)};
}

/// All cases x all initial ranges, case-major order.
inline std::vector<SuiteRun> runSuite(const SuiteOptions& opt = {}) {
  const std::size_t nr = kSuiteRangesM.size();
  return parallelMap(
      kAllCases.size() * nr, [&](std::size_t i) { return runSuiteCase(kAllCases[i / nr], kSuiteRangesM[i % nr], opt); },
      opt.jobs);
}

/// Coefficient of determination of the least-squares line through (x, y).
inline double rSquared(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("rSquared needs at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 1.0;  // constant data is fitted exactly
  if (sxx == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

struct ThresholdCheck {
  std::string name;
  bool pass{};
  std::string detail;
};

inline const SuiteRun& findRun(const std::vector<SuiteRun>& runs, CaseId id, double r0M) {
  for (const auto& r : runs) {
    if (r.id == id && r.r0M == r0M) return r;
  }
  throw DomainError(std::string("suite has no run for ") + toString(id));
}

/// Miss-distance thresholds at 2000 m and miss-vs-r0 linearity per case.
inline std::vector<ThresholdCheck> checkThresholds(const std::vector<SuiteRun>& runs) {
  std::vector<ThresholdCheck> out;
  const double r0 = kSuiteRangesM.back();
  for (const CaseId id : kAllCases) {
    const SuiteRun& r = findRun(runs, id, r0);
    const std::string name = std::string(toString(id)) + "@2000m";
    const std::string miss = "miss " + formatNumber(r.missM) + " m";
    switch (id) {
      case CaseId::H1:
      case CaseId::H2: out.push_back({name + " miss > 300 m", r.missM > 300.0, miss}); break;
      case CaseId::O1: out.push_back({name + " miss < NMAC radius", r.missM < kNmacRadiusM, miss}); break;
      case CaseId::O2:
        out.push_back({name + " no NMAC", !r.nmac, "min range " + formatNumber(r.globalMinM) + " m"});
        break;
      default: out.push_back({name + " miss > 500 m", r.missM > 500.0, miss}); break;
    }
  }
  for (const CaseId id : kAllCases) {
    if (id == CaseId::O1) continue;
    std::vector<double> xs, ys;
    for (const double r0m : kSuiteRangesM) {
      xs.push_back(r0m);
      ys.push_back(findRun(runs, id, r0m).missM);
    }
    const double r2 = rSquared(xs, ys);
    out.push_back({std::string(toString(id)) + " linear R^2 >= 0.95", r2 >= 0.95, "R^2 " + formatNumber(r2)});
  }
  return out;
}

inline CsvTable suiteTable(const std::vector<SuiteRun>& runs) {
  CsvTable t;
  t.header = {"case", "r0_m", "miss_m", "miss_norm", "miss_time_s", "global_min_m", "nmac", "collision"};
  for (const auto& r : runs) {
    t.addRow({toString(r.id), formatNumber(r.r0M), formatNumber(r.missM), formatNumber(r.missNormalized),
              formatNumber(r.missTimeS), formatNumber(r.globalMinM), r.nmac ? "1" : "0", r.collision ? "1" : "0"});
  }
  return t;
}

}  // namespace bearing_game
