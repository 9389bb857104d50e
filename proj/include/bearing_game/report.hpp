#pragma once

// CSV tables and a small SVG line-plot renderer.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bearing_game/errors.hpp"

namespace bearing_game {

/// Fixed numeric formatting used in every data file.
inline std::string formatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void addRow(std::vector<std::string> row) {
    if (row.size() != header.size()) throw DomainError("CSV row width does not match header");
    rows.push_back(std::move(row));
  }

  std::size_t columnIndex(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }

  std::vector<double> numbers(const std::string& name) const {
    const std::size_t c = columnIndex(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::stod(r[c]));
    return out;
  }

  std::vector<std::string> strings(const std::string& name) const {
    const std::size_t c = columnIndex(name);
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }

  void write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    write(out);
  }

  /// Plain comma-separated values without quoting, as written by write().
  static CsvTable parse(std::istream& in) {
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
      std::vector<std::string> cells;
      std::stringstream ss(s);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!s.empty() && s.back() == ',') cells.emplace_back();
      return cells;
    };
    if (!std::getline(in, line)) throw DomainError("empty CSV");
    t.header = split(line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      t.addRow(split(line));
    }
    return t;
  }

  static CsvTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    return parse(in);
  }
};

// SVG -------------------------------------------------------------------------

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;
  double width = 1.5;
  /// Fill colour for the closed outline; empty draws a line only.
  std::string fill;
};

struct Panel {
  std::string title;
  std::string xLabel;
  std::string yLabel;
  std::vector<Series> series;
  bool equalAspect = false;
  /// Optional fixed axis limits; NaN means fit to data.
  double xMin = std::numeric_limits<double>::quiet_NaN();
  double xMax = std::numeric_limits<double>::quiet_NaN();
  double yMin = std::numeric_limits<double>::quiet_NaN();
  double yMax = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::string escapeXml(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// About five round tick values covering [lo, hi].
inline std::vector<double> niceTicks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

}  // namespace detail

/// Renders panels side by side into one SVG document.
inline std::string renderSvg(const std::vector<Panel>& panels, double panelWidth = 480.0, double panelHeight = 420.0) {
  const double margin = 60.0;
  std::ostringstream os;
  const double totalW = panelWidth * static_cast<double>(panels.size());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::px(totalW) << "\" height=\""
     << detail::px(panelHeight) << "\" viewBox=\"0 0 " << detail::px(totalW) << ' ' << detail::px(panelHeight)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& p = panels[pi];
    const double ox = panelWidth * static_cast<double>(pi);
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : p.series) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
      }
    }
    if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (!std::isnan(p.xMin)) x0 = p.xMin;
    if (!std::isnan(p.xMax)) x1 = p.xMax;
    if (!std::isnan(p.yMin)) y0 = p.yMin;
    if (!std::isnan(p.yMax)) y1 = p.yMax;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;

    const double plotW = panelWidth - 1.5 * margin;
    const double plotH = panelHeight - 2.0 * margin;
    double sx = plotW / (x1 - x0);
    double sy = plotH / (y1 - y0);
    if (p.equalAspect) {
      const double s = std::min(sx, sy);
      const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      sx = sy = s;
      x0 = cx - 0.5 * plotW / s, x1 = cx + 0.5 * plotW / s;
      y0 = cy - 0.5 * plotH / s, y1 = cy + 0.5 * plotH / s;
    }
    const double left = ox + margin;
    const double top = margin;
    auto X = [&](double v) { return left + (v - x0) * sx; };
    auto Y = [&](double v) { return top + plotH - (v - y0) * sy; };

    os << "<g>\n";
    os << "<text x=\"" << detail::px(left + plotW / 2) << "\" y=\"" << detail::px(top - 20)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << detail::escapeXml(p.title) << "</text>\n";
    os << "<rect x=\"" << detail::px(left) << "\" y=\"" << detail::px(top) << "\" width=\"" << detail::px(plotW)
       << "\" height=\"" << detail::px(plotH) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const double t : detail::niceTicks(x0, x1)) {
      os << "<line x1=\"" << detail::px(X(t)) << "\" y1=\"" << detail::px(top + plotH) << "\" x2=\""
         << detail::px(X(t)) << "\" y2=\"" << detail::px(top + plotH + 4) << "\" stroke=\"black\"/>";
      os << "<text x=\"" << detail::px(X(t)) << "\" y=\"" << detail::px(top + plotH + 16)
         << "\" text-anchor=\"middle\">" << formatNumber(t) << "</text>\n";
    }
    for (const double t : detail::niceTicks(y0, y1)) {
      os << "<line x1=\"" << detail::px(left - 4) << "\" y1=\"" << detail::px(Y(t)) << "\" x2=\"" << detail::px(left)
         << "\" y2=\"" << detail::px(Y(t)) << "\" stroke=\"black\"/>";
      os << "<text x=\"" << detail::px(left - 6) << "\" y=\"" << detail::px(Y(t) + 4) << "\" text-anchor=\"end\">"
         << formatNumber(t) << "</text>\n";
    }
    os << "<text x=\"" << detail::px(left + plotW / 2) << "\" y=\"" << detail::px(top + plotH + 34)
       << "\" text-anchor=\"middle\">" << detail::escapeXml(p.xLabel) << "</text>\n";
    os << "<text transform=\"translate(" << detail::px(ox + 14) << ',' << detail::px(top + plotH / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << detail::escapeXml(p.yLabel) << "</text>\n";

    os << "<clipPath id=\"clip" << pi << "\"><rect x=\"" << detail::px(left) << "\" y=\"" << detail::px(top)
       << "\" width=\"" << detail::px(plotW) << "\" height=\"" << detail::px(plotH) << "\"/></clipPath>\n";
    os << "<g clip-path=\"url(#clip" << pi << ")\">\n";
    for (const auto& s : p.series) {
      if (s.markers) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          os << "<circle cx=\"" << detail::px(X(s.x[i])) << "\" cy=\"" << detail::px(Y(s.y[i])) << "\" r=\"3\" fill=\""
             << s.color << "\"/>\n";
        }
      }
      if (s.x.size() < 2) continue;
      os << "<polyline fill=\"" << (s.fill.empty() ? "none" : s.fill) << "\" stroke=\"" << s.color << "\" stroke-width=\"" << detail::px(s.width) << '"';
      if (s.dashed) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << detail::px(X(s.x[i])) << ',' << detail::px(Y(s.y[i])) << ' ';
      }
      os << "\"/>\n";
    }
    os << "</g>\n";

    double ly = top + 14;
    for (const auto& s : p.series) {
      if (s.label.empty()) continue;
      os << "<line x1=\"" << detail::px(left + 8) << "\" y1=\"" << detail::px(ly - 4) << "\" x2=\""
         << detail::px(left + 28) << "\" y2=\"" << detail::px(ly - 4) << "\" stroke=\"" << s.color
         << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
      os << "<text x=\"" << detail::px(left + 32) << "\" y=\"" << detail::px(ly) << "\">" << detail::escapeXml(s.label)
         << "</text>\n";
      ly += 14;
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace bearing_game
