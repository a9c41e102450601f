#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coop {

// Minimal hand-rolled SVG line charts; no plotting dependency, diffable
// output. Non-finite samples are skipped when ranging and plotting.
struct ChartSeries {
  std::string label;
  std::string color;  // SVG color string
  std::vector<double> xs;
  std::vector<double> ys;
};

namespace svg_detail {

inline std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

inline std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svg_detail

inline std::string line_chart_svg(const std::string& title,
                                  const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartSeries>& series,
                                  int width = 800, int height = 480) {
  using svg_detail::escape;
  using svg_detail::fmt;

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const ChartSeries& s : series) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      if (!any) {
        x_min = x_max = s.xs[i];
        y_min = y_max = s.ys[i];
        any = true;
      } else {
        x_min = std::min(x_min, s.xs[i]);
        x_max = std::max(x_max, s.xs[i]);
        y_min = std::min(y_min, s.ys[i]);
        y_max = std::max(y_max, s.ys[i]);
      }
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(width / 2.0) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + escape(title) + "</text>\n";

  // Axes and gridlines with value labels.
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fy = y_min + (y_max - y_min) * i / ticks;
    const double gy = py(fy);
    out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(gy) + "\" x2=\"" +
           fmt(ml + pw) + "\" y2=\"" + fmt(gy) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(ml - 8.0) + "\" y=\"" + fmt(gy + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + fmt(fy) + "</text>\n";
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double gx = px(fx);
    out += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(mt + ph + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + fmt(fx) + "</text>\n";
  }
  out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" +
         fmt(ml) + "\" y2=\"" + fmt(mt + ph) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
         fmt(ml + pw) + "\" y2=\"" + fmt(mt + ph) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<text x=\"" + fmt(ml + pw / 2.0) + "\" y=\"" +
         fmt(height - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + escape(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(mt + ph / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " + fmt(mt + ph / 2.0) +
         ")\">" + escape(y_label) + "</text>\n";

  // Series polylines and legend.
  double legend_y = mt + 14.0;
  for (const ChartSeries& s : series) {
    std::string points;
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      if (!points.empty()) points += ' ';
      points += fmt(px(s.xs[i])) + "," + fmt(py(s.ys[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + escape(s.color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    out += "<line x1=\"" + fmt(ml + pw - 150.0) + "\" y1=\"" +
           fmt(legend_y - 4.0) + "\" x2=\"" + fmt(ml + pw - 126.0) +
           "\" y2=\"" + fmt(legend_y - 4.0) + "\" stroke=\"" +
           escape(s.color) + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(ml + pw - 120.0) + "\" y=\"" + fmt(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(s.label) + "</text>\n";
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

inline void write_svg(const std::filesystem::path& path,
                      const std::string& svg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_svg: cannot open " + path.string());
  }
  out << svg;
  if (!out) {
    throw std::runtime_error("write_svg: write failed for " + path.string());
  }
}

}  // namespace coop
