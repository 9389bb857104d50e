#pragma once

// CSV exports and the figures drawn from them. Every figure function takes a
// parsed CSV table only, so plots can be regenerated from the data files.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bearing_game/game_solver.hpp"
#include "bearing_game/report.hpp"

namespace bearing_game {

inline const char* toString(Family f) { return f == Family::Right ? "right" : "left"; }

inline CsvTable fieldTable(const std::vector<RetroTrajectory>& field) {
  CsvTable t;
  t.header = {"family", "rT", "tau", "x", "y", "Vx", "Vy", "u_h"};
  for (const auto& tr : field) {
    for (const auto& s : tr.samples) {
      t.addRow({toString(tr.terminal.family), formatNumber(tr.terminal.rT), formatNumber(s.tau), formatNumber(s.x),
                formatNumber(s.y), formatNumber(s.Vx), formatNumber(s.Vy), formatNumber(s.uh)});
    }
  }
  return t;
}

/// Barrier branches in the field format (one trajectory per family at rT = rho).
inline CsvTable barrierTable(const BarrierCurve& b, double tauStep = 1e-3) {
  std::vector<RetroTrajectory> branches;
  FieldOptions opt;
  opt.tauStep = tauStep;
  opt.tauMax = std::numeric_limits<double>::infinity();
  for (const Family f : {Family::Right, Family::Left}) {
    branches.push_back(retroTrajectory(TerminalCondition::make(b.vh, b.rho, f), opt));
  }
  return fieldTable(branches);
}

namespace detail {

struct Polyline {
  std::string family;
  double rT{};
  std::vector<double> x;
  std::vector<double> y;
};

/// Groups field rows into trajectories in file order.
inline std::vector<Polyline> polylines(const CsvTable& t) {
  const auto fam = t.strings("family");
  const auto rT = t.numbers("rT");
  const auto tau = t.numbers("tau");
  const auto x = t.numbers("x");
  const auto y = t.numbers("y");
  std::vector<Polyline> out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (out.empty() || tau[i] == 0.0 || out.back().family != fam[i] || out.back().rT != rT[i]) {
      out.push_back({fam[i], rT[i], {}, {}});
    }
    out.back().x.push_back(x[i]);
    out.back().y.push_back(y[i]);
  }
  return out;
}

/// Rays from the origin through the terminal points (lines of minimum range).
inline std::vector<Series> terminalRays(const std::vector<Polyline>& lines, double length) {
  std::vector<Series> out;
  for (const std::string fam : {"right", "left"}) {
    for (const auto& p : lines) {
      if (p.family != fam || p.x.empty()) continue;
      const double n = std::hypot(p.x.front(), p.y.front());
      if (!(n > 0.0)) continue;
      Series s;
      s.label = out.empty() ? "line of minimum range" : "";
      s.x = {0.0, length * p.x.front() / n};
      s.y = {0.0, length * p.y.front() / n};
      s.color = "#d62728";
      s.dashed = true;
      out.push_back(std::move(s));
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Field figure: trajectories of both families plus lines of minimum range.
inline std::string fieldSvg(const CsvTable& field, double extent = 4.0) {
  const auto lines = detail::polylines(field);
  Panel p;
  p.title = "Optimal trajectory field (relative frame)";
  p.xLabel = "x";
  p.yLabel = "y";
  p.equalAspect = true;
  p.xMin = -extent;
  p.xMax = extent;
  p.yMin = -0.5 * extent;
  p.yMax = 1.5 * extent;
  for (const auto& l : lines) {
    Series s;
    s.x = l.x;
    s.y = l.y;
    s.color = l.family == "right" ? "#1f77b4" : "#2ca02c";
    s.width = 0.8;
    p.series.push_back(std::move(s));
  }
  for (auto& r : detail::terminalRays(lines, 2.0 * extent)) p.series.push_back(std::move(r));
  return renderSvg({p}, 560.0, 560.0);
}

/// Barrier figure: shaded small-miss region, both branches, rear arc r = rho,
/// and the lines of minimum range.
inline std::string barrierSvg(const CsvTable& barrierCsv) {
  const auto lines = detail::polylines(barrierCsv);
  const detail::Polyline* right = nullptr;
  const detail::Polyline* left = nullptr;
  for (const auto& l : lines) (l.family == "right" ? right : left) = &l;
  if (!right || !left) throw DomainError("barrier CSV needs a right and a left branch");

  const double rho = right->rT;
  const double thR = std::atan2(right->x.front(), right->y.front());
  const double thL = std::atan2(left->x.front(), left->y.front());

  // outline: origin, right branch to the axis, left branch back, rear arc
  Series region;
  region.color = "none";
  region.fill = "#fdd9a0";
  region.width = 0.0;
  region.x = right->x;
  region.y = right->y;
  region.x.insert(region.x.end(), left->x.rbegin(), left->x.rend());
  region.y.insert(region.y.end(), left->y.rbegin(), left->y.rend());
  const int arcPoints = 90;
  for (int i = 0; i <= arcPoints; ++i) {
    const double a = thL - (kTwoPi - (thR - thL)) * i / arcPoints;
    region.x.push_back(rho * std::sin(a));
    region.y.push_back(rho * std::cos(a));
  }
  region.label = "miss < rho";

  const double extent = std::max(1.5, 1.3 * std::max(right->y.back(), right->x.back()));
  Panel p;
  p.title = "Barrier for miss-distance rho = " + formatNumber(rho);
  p.xLabel = "x";
  p.yLabel = "y";
  p.equalAspect = true;
  p.xMin = -extent;
  p.xMax = extent;
  p.yMin = -0.6 * extent;
  p.yMax = 1.2 * extent;
  p.series.push_back(region);
  for (const auto* b : {right, left}) {
    Series s;
    s.label = b == right ? "barrier" : "";
    s.x = b->x;
    s.y = b->y;
    s.color = "#1f1f1f";
    s.width = 2.0;
    p.series.push_back(std::move(s));
  }
  for (auto& r : detail::terminalRays(lines, 2.0 * extent)) p.series.push_back(std::move(r));
  return renderSvg({p}, 560.0, 560.0);
}

/// Encounter figure: both inertial paths and range against time.
inline std::string trajectorySvg(const CsvTable& traj, const std::string& lengthUnit, const std::string& timeUnit) {
  Panel paths;
  paths.title = "Inertial paths";
  paths.xLabel = "x [" + lengthUnit + "]";
  paths.yLabel = "y [" + lengthUnit + "]";
  paths.equalAspect = true;
  auto line = [](std::string label, std::vector<double> x, std::vector<double> y, std::string color) {
    Series s;
    s.label = std::move(label);
    s.x = std::move(x);
    s.y = std::move(y);
    s.color = std::move(color);
    return s;
  };
  paths.series.push_back(line("aircraft", traj.numbers("x_a"), traj.numbers("y_a"), "#1f77b4"));
  paths.series.push_back(line("hazard", traj.numbers("x_h"), traj.numbers("y_h"), "#d62728"));

  Panel range;
  range.title = "Range";
  range.xLabel = "t [" + timeUnit + "]";
  range.yLabel = "r [" + lengthUnit + "]";
  range.yMin = 0.0;
  range.series.push_back(line("r(t)", traj.numbers("t"), traj.numbers("r"), "#333333"));
  return renderSvg({paths, range});
}

/// Minimum range against initial range, one panel per encounter class.
inline std::string suiteSvg(const CsvTable& suite) {
  const auto cases = suite.strings("case");
  const auto r0 = suite.numbers("r0_m");
  const auto miss = suite.numbers("miss_m");
  std::map<std::string, Series> byCase;
  std::vector<std::string> order;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!byCase.count(cases[i])) order.push_back(cases[i]);
    auto& s = byCase[cases[i]];
    s.label = cases[i];
    s.markers = true;
    s.x.push_back(r0[i]);
    s.y.push_back(miss[i]);
  }
  std::vector<Panel> panels;
  for (const auto& [prefix, title] : {std::pair<std::string, std::string>{"H", "Head-on"},
                                      {"C", "Converging"},
                                      {"O", "Overtaking"}}) {
    Panel p;
    p.title = title;
    p.xLabel = "initial range r(0) [m]";
    p.yLabel = "minimum range r(T) [m]";
    p.yMin = 0.0;
    for (const auto& c : order) {
      if (c.rfind(prefix, 0) != 0) continue;
      Series s = byCase[c];
      s.color = colors[p.series.size() % 4];
      p.series.push_back(std::move(s));
    }
    panels.push_back(std::move(p));
  }
  return renderSvg(panels, 420.0, 380.0);
}

}  // namespace bearing_game
