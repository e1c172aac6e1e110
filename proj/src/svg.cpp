#include "encsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace encsim::svg {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0, kMargin = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

const char* color_for(size_t k) { return kPalette[k % (sizeof(kPalette) / sizeof(char*))]; }

struct Bounds {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  void include(double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  void pad(double frac) {
    const double dx = std::max(1e-9, (x_max - x_min) * frac);
    const double dy = std::max(1e-9, (y_max - y_min) * frac);
    x_min -= dx;
    x_max += dx;
    y_min -= dy;
    y_max += dy;
  }
};

struct Mapper {
  Bounds b;
  double sx(double x) const {
    return kMargin + (x - b.x_min) / (b.x_max - b.x_min) * (kWidth - 2 * kMargin);
  }
  // SVG y grows downward.
  double sy(double y) const {
    return kHeight - kMargin - (y - b.y_min) / (b.y_max - b.y_min) * (kHeight - 2 * kMargin);
  }
};

std::string header() {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n<rect width=\"%.0f\" height=\"%.0f\" "
                "fill=\"white\"/>\n",
                kWidth, kHeight, kWidth, kHeight, kWidth, kHeight);
  return buf;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color,
                     const char* dash = nullptr) {
  std::string out = "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"1.5\"";
  if (dash) {
    out += " stroke-dasharray=\"";
    out += dash;
    out += "\"";
  }
  out += " points=\"";
  char buf[64];
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", x, y);
    out += buf;
  }
  out += "\"/>\n";
  return out;
}

std::string circle(double cx, double cy, double radius, const char* color, bool filled) {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" stroke=\"%s\" fill=\"%s\"/>\n", cx,
                cy, radius, color, filled ? color : "white");
  return buf;
}

std::string square(double cx, double cy, double half, const char* color) {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.2f\" height=\"%.2f\" stroke=\"%s\" "
                "fill=\"%s\"/>\n",
                cx - half, cy - half, 2 * half, 2 * half, color, color);
  return buf;
}

std::map<int, std::vector<const LogRow*>> rows_by_id(const TrajectoryLog& log) {
  std::map<int, std::vector<const LogRow*>> by_id;
  for (const auto& r : log.rows) by_id[r.id].push_back(&r);
  return by_id;
}

}  // namespace

std::string trajectories(const TrajectoryLog& log, const Scenario& scenario) {
  const auto by_id = rows_by_id(log);
  Bounds b;
  bool first = true;
  for (const auto& r : log.rows) {
    if (first) {
      b = {r.x, r.x, r.y, r.y};
      first = false;
    }
    b.include(r.x, r.y);
  }
  for (const auto& a : scenario.airplanes) {
    b.include(a.start.x(), a.start.y());
    b.include(a.goal.x(), a.goal.y());
  }
  b.pad(0.08);
  const Mapper m{b};

  std::string out = header();
  size_t k = 0;
  for (const auto& [id, rows] : by_id) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const LogRow* r : rows) pts.emplace_back(m.sx(r->x), m.sy(r->y));
    out += polyline(pts, color_for(k));
    ++k;
  }
  k = 0;
  for (const auto& a : scenario.airplanes) {
    out += circle(m.sx(a.start.x()), m.sy(a.start.y()), 5.0, color_for(k), false);
    out += square(m.sx(a.goal.x()), m.sy(a.goal.y()), 4.0, color_for(k));
    ++k;
  }
  out += "</svg>\n";
  return out;
}

std::string opinions(const TrajectoryLog& log) {
  const auto by_id = rows_by_id(log);
  Bounds b{0.0, 1e-9, -1e-3, 1e-3};
  for (const auto& r : log.rows) b.include(r.t, r.z);
  b.pad(0.05);
  const Mapper m{b};

  std::string out = header();
  // zero line
  out += polyline({{m.sx(b.x_min), m.sy(0.0)}, {m.sx(b.x_max), m.sy(0.0)}}, "#cccccc", "4 4");
  size_t k = 0;
  for (const auto& [id, rows] : by_id) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const LogRow* r : rows) pts.emplace_back(m.sx(r->t), m.sy(r->z));
    out += polyline(pts, color_for(k));
    ++k;
  }
  out += "</svg>\n";
  return out;
}

std::string separation(const TrajectoryLog& log, double r) {
  Bounds b{0.0, 1e-9, 0.0, std::max(r * 1.5, 1e-3)};
  std::map<double, double> sep_by_t;
  for (const auto& row : log.rows) sep_by_t[row.t] = row.min_sep;
  for (const auto& [t, s] : sep_by_t) b.include(t, s);
  b.pad(0.05);
  const Mapper m{b};

  std::string out = header();
  out += polyline({{m.sx(b.x_min), m.sy(r)}, {m.sx(b.x_max), m.sy(r)}}, "#d62728", "6 3");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(sep_by_t.size());
  for (const auto& [t, s] : sep_by_t) pts.emplace_back(m.sx(t), m.sy(s));
  out += polyline(pts, "#1f77b4");
  out += "</svg>\n";
  return out;
}

std::string bifurcation(const BifurcationSweep& sweep) {
  Bounds b{0.0, 1e-9, -1e-3, 1e-3};
  for (const auto& pt : sweep.points)
    for (const auto& eq : pt.equilibria) b.include(pt.u, eq.z1);
  b.pad(0.05);
  const Mapper m{b};

  std::string out = header();
  out += polyline({{m.sx(b.x_min), m.sy(0.0)}, {m.sx(b.x_max), m.sy(0.0)}}, "#cccccc", "4 4");
  for (const auto& pt : sweep.points)
    for (const auto& eq : pt.equilibria)
      out += circle(m.sx(pt.u), m.sy(eq.z1), 2.0, eq.stable ? "#1f77b4" : "#d62728", eq.stable);
  out += "</svg>\n";
  return out;
}

}  // namespace encsim::svg
