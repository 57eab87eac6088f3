#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "latentlob/csv.hpp"

namespace latentlob {

/// Minimal SVG chart emitter for quick-look plots. Presentation only; the
/// CSVs are the source of truth.
class SvgCanvas {
 public:
  SvgCanvas(int w, int h) : w_(w), h_(h) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
             "\" height=\"" + std::to_string(h) + "\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void polyline(const std::vector<double>& x, const std::vector<double>& y, const char* color) {
    if (x.size() < 2) return;
    std::string pts;
    for (size_t i = 0; i < x.size(); ++i)
      pts += num(px(x[i])) + "," + num(py(y[i])) + " ";
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }

  void circle(double x, double y, const char* color) {
    body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"2.5\" fill=\"" +
             std::string(color) + "\"/>\n";
  }

  void rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    body_ += "<rect x=\"" + num(px(x0)) + "\" y=\"" + num(py(y1)) + "\" width=\"" +
             num(px(x1) - px(x0)) + "\" height=\"" + num(py(y0) - py(y1)) + "\" fill=\"" + fill +
             "\"/>\n";
  }

  void line(double x0, double y0, double x1, double y1, const char* color) {
    body_ += "<line x1=\"" + num(px(x0)) + "\" y1=\"" + num(py(y0)) + "\" x2=\"" + num(px(x1)) +
             "\" y2=\"" + num(py(y1)) + "\" stroke=\"" + std::string(color) + "\"/>\n";
  }

  void text(double x, double y, const std::string& s) {
    body_ += "<text x=\"" + num(px(x)) + "\" y=\"" + num(py(y)) +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + s + "</text>\n";
  }

  void set_view(double x0, double x1, double y0, double y1) {
    vx0_ = x0;
    vx1_ = x1;
    vy0_ = y0;
    vy1_ = y1;
  }

  void save(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    os << body_ << "</svg>\n";
  }

 private:
  double px(double x) const { return margin_ + (x - vx0_) / (vx1_ - vx0_) * (w_ - 2 * margin_); }
  double py(double y) const { return h_ - margin_ - (y - vy0_) / (vy1_ - vy0_) * (h_ - 2 * margin_); }
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }

  int w_, h_;
  double margin_ = 40;
  double vx0_ = 0, vx1_ = 1, vy0_ = 0, vy1_ = 1;
  std::string body_;
};

/// Log-log scatter-with-line chart of positive (x, y) points.
inline void svg_loglog(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& title) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  }
  if (lx.size() < 2) return;
  SvgCanvas c(640, 480);
  const auto [xmin, xmax] = std::minmax_element(lx.begin(), lx.end());
  const auto [ymin, ymax] = std::minmax_element(ly.begin(), ly.end());
  c.set_view(*xmin, *xmax + 1e-9, *ymin, *ymax + 1e-9);
  c.polyline(lx, ly, "#1f77b4");
  for (size_t i = 0; i < lx.size(); ++i) c.circle(lx[i], ly[i], "#1f77b4");
  c.text(*xmin, *ymax, title + " (log-log)");
  c.save(path);
}

/// Heat map of S over a (gamma, value) grid with the S=0 contour marked by
/// cell-edge crossings.
inline void svg_phase_heatmap(const std::string& path, const std::vector<PhaseRow>& rows,
                              const std::string& title) {
  if (rows.empty()) return;
  std::vector<double> g, v;
  for (const auto& r : rows) {
    g.push_back(r.param1);
    v.push_back(r.param2);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  double smax = 1e-9;
  for (const auto& r : rows) smax = std::max(smax, std::fabs(r.s));
  SvgCanvas c(640, 480);
  c.set_view(-0.5, static_cast<double>(g.size()) - 0.5, -0.5, static_cast<double>(v.size()) - 0.5);
  auto idx = [](const std::vector<double>& xs, double x) {
    return static_cast<double>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };
  for (const auto& r : rows) {
    const double i = idx(g, r.param1), j = idx(v, r.param2);
    const double t = std::clamp(r.s / smax, -1.0, 1.0);
    const int red = t > 0 ? 255 : static_cast<int>(255 * (1 + t));
    const int blue = t < 0 ? 255 : static_cast<int>(255 * (1 - t));
    char color[16];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", red, 240 - std::abs(static_cast<int>(60 * t)), blue);
    c.rect(i - 0.5, j - 0.5, i + 0.5, j + 0.5, color);
    if (std::fabs(r.s) < 3.0 * r.stderr_s) c.circle(i, j, "#000000");
  }
  c.text(0, static_cast<double>(v.size()) - 0.6, title + " (dot: |S| < 3 stderr)");
  c.save(path);
}

}  // namespace latentlob
