// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#include "risim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace risim {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = kWidth - 150.0;  // room for the legend
constexpr double kTop = 30.0;
constexpr double kBottom = kHeight - 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

struct SeriesPoint {
  double x = 0.0;
  double mean = 0.0;
  double sterr = 0.0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double metric_of(const ResultRow& r, PlotMetric m) {
  switch (m) {
    case PlotMetric::RATE: return r.rate_bps_hz;
    case PlotMetric::NMSE: return r.nmse;
    case PlotMetric::CHANNEL_POWER: return r.channel_power;
  }
  throw std::invalid_argument("unknown metric");
}

const char* metric_label(PlotMetric m) {
  switch (m) {
    case PlotMetric::RATE: return "rate (bits/s/Hz)";
    case PlotMetric::NMSE: return "NMSE";
    case PlotMetric::CHANNEL_POWER: return "channel power";
  }
  throw std::invalid_argument("unknown metric");
}

// Round a raw interval up to a 1/2/5 decade step so ticks land on readable
// numbers.
double nice_step(double span, int target_ticks) {
  double raw = span / std::max(target_ticks - 1, 1);
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double nice = frac <= 1.0 ? 1.0 : frac <= 2.0 ? 2.0 : frac <= 5.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

std::string render_plot_svg(const std::vector<ResultRow>& rows, PlotMetric metric) {
  // Aggregate per (algorithm, value), first-appearance order of algorithms.
  std::vector<std::string> order;
  std::map<std::string, std::map<double, std::vector<double>>> samples;
  std::string axis;
  for (const ResultRow& r : rows) {
    if (r.status != "ok") continue;
    if (axis.empty()) {
      axis = r.axis;
    } else if (axis != r.axis) {
      throw std::invalid_argument("mixed sweep axes in plot input");
    }
    if (samples.find(r.algorithm) == samples.end()) order.push_back(r.algorithm);
    samples[r.algorithm][r.value].push_back(metric_of(r, metric));
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
         fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (order.empty()) {
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
           "no data</text>\n</svg>\n";
    return svg;
  }

  std::map<std::string, std::vector<SeriesPoint>> series;
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool first = true;
  for (const std::string& alg : order) {
    for (const auto& [value, vals] : samples[alg]) {
      SeriesPoint p;
      p.x = value;
      for (double v : vals) p.mean += v;
      p.mean /= static_cast<double>(vals.size());
      if (vals.size() > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - p.mean) * (v - p.mean);
        p.sterr = std::sqrt(ss / (static_cast<double>(vals.size()) - 1.0)) /
                  std::sqrt(static_cast<double>(vals.size()));
      }
      if (first) {
        x_lo = x_hi = p.x;
        y_lo = p.mean - p.sterr;
        y_hi = p.mean + p.sterr;
        first = false;
      } else {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.mean - p.sterr);
        y_hi = std::max(y_hi, p.mean + p.sterr);
      }
      series[alg].push_back(p);
    }
  }
  if (x_hi == x_lo) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  double x_pad = 0.05 * (x_hi - x_lo);
  double y_pad = 0.05 * (y_hi - y_lo);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_lo -= y_pad;
  y_hi += y_pad;

  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop); };

  // Grid and ticks.
  double xs = nice_step(x_hi - x_lo, 6);
  double ys = nice_step(y_hi - y_lo, 6);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-12 * xs; t += xs) {
    svg += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px(t)) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(kBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           fmt_tick(t) + "</text>\n";
  }
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-12 * ys; t += ys) {
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(py(t)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 8.0) + "\" y=\"" + fmt(py(t) + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           fmt_tick(t) + "</text>\n";
  }
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
         fmt(kRight - kLeft) + "\" height=\"" + fmt(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + axis +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " +
         fmt((kTop + kBottom) / 2) + ")\">" + std::string(metric_label(metric)) + "</text>\n";

  // Series: error whiskers, polyline, markers, legend entry.
  for (size_t si = 0; si < order.size(); ++si) {
    const std::string& alg = order[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    const std::vector<SeriesPoint>& pts = series[alg];

    for (const SeriesPoint& p : pts) {
      if (p.sterr <= 0.0) continue;
      double x = px(p.x);
      svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(py(p.mean - p.sterr)) + "\" x2=\"" +
             fmt(x) + "\" y2=\"" + fmt(py(p.mean + p.sterr)) + "\" stroke=\"" + color +
             "\" stroke-width=\"1\"/>\n";
      for (double end : {p.mean - p.sterr, p.mean + p.sterr}) {
        svg += "<line x1=\"" + fmt(x - 3.0) + "\" y1=\"" + fmt(py(end)) + "\" x2=\"" +
               fmt(x + 3.0) + "\" y2=\"" + fmt(py(end)) + "\" stroke=\"" + color +
               "\" stroke-width=\"1\"/>\n";
      }
    }

    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"";
    for (const SeriesPoint& p : pts) {
      svg += fmt(px(p.x)) + "," + fmt(py(p.mean)) + " ";
    }
    svg += "\"/>\n";
    for (const SeriesPoint& p : pts) {
      svg += "<circle cx=\"" + fmt(px(p.x)) + "\" cy=\"" + fmt(py(p.mean)) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }

    double ly = kTop + 16.0 + 18.0 * static_cast<double>(si);
    svg += "<line x1=\"" + fmt(kRight + 12.0) + "\" y1=\"" + fmt(ly - 4.0) + "\" x2=\"" +
           fmt(kRight + 34.0) + "\" y2=\"" + fmt(ly - 4.0) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(kRight + 40.0) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + alg + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_plot(const std::vector<ResultRow>& rows, const std::string& path, PlotMetric metric) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << render_plot_svg(rows, metric);
}

}  // namespace risim
