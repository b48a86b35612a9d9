#pragma once

// Minimal deterministic SVG emitter for run figures.
//
// Panel (a): state-space view of coordinates 1 and 2 with the true and center
// trajectories, obstacle disks at snapshot times, the target, and the
// shrinking set at t = 0 and t_f. Panel (b): each x_i(t) against c_i(t) +/- r_c.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcz/barriers.hpp"
#include "vcz/scenario.hpp"
#include "vcz/simulator.hpp"

namespace vcz {

class SvgWriter {
 public:
  SvgWriter(double width, double height) : width_(width), height_(height) {}

  void circle(double cx, double cy, double r, const std::string& style) {
    body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" " << style << "/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
    if (pts.empty()) return;
    body_ << "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << "," << num(pts[i].second);
    body_ << "\" fill=\"none\" " << style << "/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& style) {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" " << style << "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& style) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
          << "\" " << style << "/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& style = "font-size=\"11\"") {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" " << style << ">" << escape(s) << "</text>\n";
  }
  void raw(const std::string& s) { body_ << s; }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
    return buf;
  }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '<') out += "&lt;";
      else if (ch == '>') out += "&gt;";
      else if (ch == '&') out += "&amp;";
      else out += ch;
    }
    return out;
  }

  double width_, height_;
  std::ostringstream body_;
};

/// Affine map from a data window onto a pixel box (y axis flipped).
struct PlotFrame {
  double px, py, pw, ph;      // pixel box
  double x0, x1, y0, y1;      // data window
  double sx(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double sy(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
  double scale() const { return pw / (x1 - x0); }
};

namespace detail {

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::round(v * 1000.0) / 1000.0);
  return buf;
}

/// Round tick positions (1, 2 or 5 times a power of ten) covering [lo, hi], about `target` of them.
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return ticks;
}

inline void draw_axes(SvgWriter& svg, const PlotFrame& f, const std::string& xlabel, const std::string& ylabel) {
  svg.rect(f.px, f.py, f.pw, f.ph, "fill=\"none\" stroke=\"black\" stroke-width=\"1\"");
  for (double xv : nice_ticks(f.x0, f.x1)) {
    svg.line(f.sx(xv), f.py + f.ph, f.sx(xv), f.py + f.ph + 4, "stroke=\"black\"");
    svg.text(f.sx(xv) - 6, f.py + f.ph + 16, tick_label(xv), "font-size=\"10\"");
  }
  for (double yv : nice_ticks(f.y0, f.y1)) {
    svg.line(f.px - 4, f.sy(yv), f.px, f.sy(yv), "stroke=\"black\"");
    svg.text(f.px - 28, f.sy(yv) + 3, tick_label(yv), "font-size=\"10\"");
  }
  svg.text(f.px + f.pw / 2 - 10, f.py + f.ph + 32, xlabel);
  svg.text(f.px - 44, f.py - 6, ylabel);
}

}  // namespace detail

inline std::vector<double> default_snapshots(double t_f) { return {0.0, 0.5 * t_f, t_f}; }

inline std::string plot_run_svg(const SimTrace& trace, const Scenario& s, const std::vector<double>& snapshots) {
  const Eigen::Index n = s.plant.n;
  const double panel_w = 460, panel_h = 420, margin = 60;
  const int series_rows = static_cast<int>(n);
  const double series_h = std::max(160.0, panel_h / series_rows);
  const double total_h = std::max(panel_h, series_h * series_rows) + 2 * margin;
  SvgWriter svg(2 * panel_w + 3 * margin, total_h);

  // Panel (a)
  if (n >= 2) {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    auto grow = [&](double x, double y, double r) {
      lo_x = std::min(lo_x, x - r);
      hi_x = std::max(hi_x, x + r);
      lo_y = std::min(lo_y, y - r);
      hi_y = std::max(hi_y, y + r);
    };
    for (const auto& r : trace.records) grow(r.x[0], r.x[1], s.r_c);
    for (double t : snapshots)
      for (const auto& o : s.obstacles) {
        const auto b = o.center(t);
        grow(b[0], b[1], o.radius + s.r_c);
      }
    grow(s.target.center[0], s.target.center[1], s.target.radius);
    grow(s.x0[0], s.x0[1], s.r_c);
    const double span = std::max(hi_x - lo_x, hi_y - lo_y) * 1.05;
    const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
    PlotFrame f{margin, margin, panel_w, panel_h, cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};
    svg.raw("<defs><clipPath id=\"panel-a\"><rect x=\"" + SvgWriter::num(f.px) + "\" y=\"" + SvgWriter::num(f.py) +
            "\" width=\"" + SvgWriter::num(f.pw) + "\" height=\"" + SvgWriter::num(f.ph) + "\"/></clipPath></defs>\n");
    svg.text(f.px, f.py - 24, "(a) state-space trajectory", "font-size=\"13\"");
    svg.raw("<g clip-path=\"url(#panel-a)\">\n");
    for (double t : {0.0, s.t_f()})
      svg.circle(f.sx(s.target.center[0]), f.sy(s.target.center[1]), radius_at(s.shrink, t) * f.scale(),
                 "fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4,3\"");
    svg.circle(f.sx(s.target.center[0]), f.sy(s.target.center[1]), s.target.radius * f.scale(),
               "fill=\"#c8f0c8\" stroke=\"green\"");
    for (std::size_t j = 0; j < s.obstacles.size(); ++j) {
      const auto& o = s.obstacles[j];
      const bool moves = o.kind != ObstacleKind::Static;
      for (double t : snapshots) {
        const auto b = o.center(t);
        svg.circle(f.sx(b[0]), f.sy(b[1]), o.radius * f.scale(),
                   "class=\"obstacle\" data-obstacle=\"" + std::to_string(j + 1) + "\" data-center=\"" +
                       SvgWriter::num(b[0]) + "," + SvgWriter::num(b[1]) +
                       "\" fill=\"#f4b4b4\" fill-opacity=\"0.6\" stroke=\"#b03030\"");
        svg.circle(f.sx(b[0]), f.sy(b[1]), (o.radius + s.r_c) * f.scale(),
                   "fill=\"none\" stroke=\"#b03030\" stroke-dasharray=\"2,2\"");
        if (moves) svg.text(f.sx(b[0]) + 3, f.sy(b[1]) - 3, "t=" + detail::tick_label(t), "font-size=\"10\" fill=\"#b03030\"");
        if (!moves) break;
      }
    }
    std::vector<std::pair<double, double>> xs, cs;
    for (const auto& r : trace.records) {
      xs.emplace_back(f.sx(r.x[0]), f.sy(r.x[1]));
      cs.emplace_back(f.sx(r.c[0]), f.sy(r.c[1]));
    }
    svg.polyline(cs, "stroke=\"#e08000\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"");
    svg.polyline(xs, "stroke=\"#1f4fbf\" stroke-width=\"1.5\"");
    for (double t : snapshots) {
      const TraceRecord* best = nullptr;
      for (const auto& r : trace.records)
        if (!best || std::abs(r.t - t) < std::abs(best->t - t)) best = &r;
      if (!best) break;
      svg.circle(f.sx(best->c[0]), f.sy(best->c[1]), s.r_c * f.scale(), "fill=\"none\" stroke=\"#e08000\"");
      svg.circle(f.sx(best->x[0]), f.sy(best->x[1]), 2.5, "fill=\"#1f4fbf\"");
      svg.text(f.sx(best->x[0]) + 4, f.sy(best->x[1]) + 12, "t=" + detail::tick_label(t), "font-size=\"10\" fill=\"#1f4fbf\"");
    }
    svg.raw("</g>\n");
    detail::draw_axes(svg, f, "x1", "x2");
  }

  // Panel (b)
  const double bx = 2 * margin + panel_w;
  svg.text(bx, margin - 24, "(b) x(t) within c(t) +/- r_c", "font-size=\"13\"");
  for (Eigen::Index i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : trace.records) {
      lo = std::min({lo, r.x[i], r.c[i] - s.r_c});
      hi = std::max({hi, r.x[i], r.c[i] + s.r_c});
    }
    if (!(hi > lo)) {
      lo -= 1;
      hi += 1;
    }
    const double pad = 0.05 * (hi - lo);
    const double t_end = trace.records.empty() ? s.t_f() : std::max(trace.records.back().t, 1e-9);
    PlotFrame f{bx, margin + i * series_h, panel_w, series_h - 50, 0.0, t_end, lo - pad, hi + pad};
    std::vector<std::pair<double, double>> xs, up, dn;
    for (const auto& r : trace.records) {
      xs.emplace_back(f.sx(r.t), f.sy(r.x[i]));
      up.emplace_back(f.sx(r.t), f.sy(r.c[i] + s.r_c));
      dn.emplace_back(f.sx(r.t), f.sy(r.c[i] - s.r_c));
    }
    svg.polyline(up, "stroke=\"#e08000\" stroke-dasharray=\"5,3\"");
    svg.polyline(dn, "stroke=\"#e08000\" stroke-dasharray=\"5,3\"");
    svg.polyline(xs, "stroke=\"#1f4fbf\" stroke-width=\"1.5\"");
    detail::draw_axes(svg, f, "t [s]", "x" + std::to_string(i + 1));
  }
  return svg.str();
}

}  // namespace vcz
