#pragma once

// Self-contained SVG charts: mean lines with +-1 SE bands over rounds, and
// mean points with +-1 SE error bars over a discrete x (tau_max sweep).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tacmab/errors.hpp"
#include "tacmab/harness/batch.hpp"
#include "tacmab/harness/csv.hpp"

namespace tacmab::harness {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> se;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

enum class PlotStyle { kBands, kErrorBars };

inline Series series_from_stats(const std::string& label, const std::vector<StatRow>& rows) {
  Series s;
  s.label = label;
  for (const StatRow& r : rows) {
    s.x.push_back(static_cast<double>(r.round));
    s.mean.push_back(r.mean_cum_pseudo);
    s.se.push_back(r.se_pseudo);
  }
  return s;
}

/// One series per algorithm, x = tau_max, y = final regret.
inline std::vector<Series> series_from_sweep(const std::vector<SweepRow>& rows) {
  std::vector<Series> out;
  for (Algorithm a : kAllAlgorithms) {
    Series s;
    s.label = std::string(to_string(a));
    for (const SweepRow& r : rows) {
      if (r.algorithm != a) continue;
      s.x.push_back(r.tau_max);
      s.mean.push_back(r.final_regret.mean);
      s.se.push_back(r.final_regret.se);
    }
    if (!s.x.empty()) out.push_back(std::move(s));
  }
  return out;
}

namespace svg_detail {

inline constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                           "#66a61e", "#e6ab02", "#a6761d", "#666666"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// Round an axis maximum up to 1, 2 or 5 times a power of ten.
inline double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (f * mag >= v) return f * mag;
  }
  return 10.0 * mag;
}

// Smallest 1, 2 or 5 times a power of ten giving at most ~5 intervals.
inline double nice_step(double range) {
  return nice_ceiling(range / 5.0);
}

// Multiples of step inside [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
  const double step = nice_step(hi - lo);
  std::vector<double> out;
  for (double k = std::ceil(lo / step - 1e-9); k * step <= hi + 1e-9 * step; k += 1.0) {
    out.push_back(k * step);
  }
  return out;
}

// Indices kept when drawing a long series; always includes both endpoints.
inline std::vector<std::size_t> thin(std::size_t n, std::size_t max_points) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  const std::size_t stride = n <= max_points ? 1 : (n + max_points - 1) / max_points;
  for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

}  // namespace svg_detail

inline std::string render_plot(const std::vector<Series>& series, const PlotLabels& labels,
                               PlotStyle style) {
  using namespace svg_detail;
  if (series.empty()) throw InputError("plot needs at least one series");
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.mean.size() || s.x.size() != s.se.size()) {
      throw InputError("series '" + s.label + "' is empty or ragged");
    }
  }

  const double width = 720, height = 460;
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = series.front().x.front(), xmax = xmin, ymax = 0.0;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymax = std::max(ymax, s.mean[i] + s.se[i]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  ymax = nice_ceiling(ymax);
  const double ymin = 0.0;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) {
    y = std::clamp(y, ymin, ymax);
    return top + ph - (y - ymin) / (ymax - ymin) * ph;
  };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
       num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       escape(labels.title) + "</text>\n";

  // Axes, ticks and grid.
  o += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) +
       "\" y2=\"" + num(top + ph) + "\"/>\n";
  o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
       "\" y2=\"" + num(top + ph) + "\"/>\n";
  o += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double yv : ticks(ymin, ymax)) {
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(left + pw) +
         "\" y2=\"" + num(py(yv)) + "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" +
         tick_label(yv) + "</text>\n";
  }
  for (double xv : ticks(xmin, xmax)) {
    o += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) +
         "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
  }
  o += "</g>\n";
  o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 16) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       escape(labels.x_label) + "</text>\n";
  o += "<text x=\"18\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
       num(top + ph / 2) + ")\">" + escape(labels.y_label) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const std::string color = kPalette[si % std::size(kPalette)];
    const auto idx = thin(s.x.size(), 500);
    if (style == PlotStyle::kBands) {
      std::string pts;
      for (std::size_t i : idx) pts += num(px(s.x[i])) + "," + num(py(s.mean[i] + s.se[i])) + " ";
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        pts += num(px(s.x[*it])) + "," + num(py(s.mean[*it] - s.se[*it])) + " ";
      }
      pts.pop_back();
      o += "<polygon class=\"band\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" +
           pts + "\"/>\n";
    } else {
      for (std::size_t i : idx) {
        const double x = px(s.x[i]);
        o += "<line class=\"errorbar\" stroke=\"" + color + "\" x1=\"" + num(x) + "\" y1=\"" +
             num(py(s.mean[i] - s.se[i])) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(py(s.mean[i] + s.se[i])) + "\"/>\n";
        o += "<circle cx=\"" + num(x) + "\" cy=\"" + num(py(s.mean[i])) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
      }
    }
    std::string line;
    for (std::size_t i : idx) line += num(px(s.x[i])) + "," + num(py(s.mean[i])) + " ";
    line.pop_back();
    o += "<polyline class=\"series\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\" points=\"" + line + "\"/>\n";
  }

  o += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const std::string color = kPalette[si % std::size(kPalette)];
    const double y = top + 10 + 20.0 * static_cast<double>(si);
    const double x = left + pw + 16;
    o += "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 24) + "\" y2=\"" +
         num(y) + "\" stroke=\"" + color + "\" stroke-width=\"3\"/>\n";
    o += "<text x=\"" + num(x + 30) + "\" y=\"" + num(y + 4) + "\">" + escape(series[si].label) +
         "</text>\n";
  }
  o += "</g>\n</svg>\n";
  return o;
}

inline void emit_plot(const std::vector<Series>& series, const std::string& path,
                      const PlotLabels& labels, PlotStyle style = PlotStyle::kBands) {
  write_text(path, render_plot(series, labels, style));
}

}  // namespace tacmab::harness
