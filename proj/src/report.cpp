// SPDX-License-Identifier: Apache-2.0
#include "waistlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "waistlab/errors.hpp"

namespace waistlab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw NumericError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

bool RunReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass; });
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["config"] = config;
  doc["results"] = results;
  nlohmann::ordered_json vs = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    nlohmann::ordered_json item;
    item["name"] = v.name;
    item["pass"] = v.pass;
    item["detail"] = v.detail;
    vs.push_back(std::move(item));
  }
  doc["verdicts"] = std::move(vs);
  doc["all_pass"] = all_pass();
  doc["wall_clock_ms"] = wall_clock_ms;
  return doc;
}

void write_curve_csv(std::ostream& os, const VolumeCurve& curve) {
  os << "t,value,stderr,samples\n";
  for (const auto& p : curve.points)
    os << format_double(p.t) << ',' << format_double(p.value) << ','
       << format_double(p.stderr_) << ',' << p.samples << '\n';
}

void write_kp_csv(std::ostream& os, const KpReport& report) {
  os << "alpha,volume,stderr\n";
  for (const auto& p : report.curve)
    os << format_double(p.alpha) << ',' << format_double(p.volume) << ','
       << format_double(p.stderr_) << '\n';
}

void write_sweep_csv(std::ostream& os, const FiberSweep& sweep) {
  os << "level,content,stderr\n";
  for (const auto& lv : sweep.levels)
    os << format_double(lv.level) << ',' << format_double(lv.content) << ','
       << format_double(lv.stderr_) << '\n';
}

namespace {

//! Fixed-precision label for tick marks; full precision would clutter the
//! axis.
std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_curve_svg(std::ostream& os, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotPoint>& points) {
  const int width = 640, height = 480;
  const int ml = 70, mr = 20, mt = 40, mb = 50;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;

  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (!points.empty()) {
    x_lo = x_hi = points.front().x;
    y_lo = y_hi = points.front().y;
    for (const auto& p : points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y - p.err);
      y_hi = std::max(y_hi, p.y + p.err);
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  const double x_pad = 0.04 * (x_hi - x_lo), y_pad = 0.06 * (y_hi - y_lo);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_lo -= y_pad;
  y_hi += y_pad;

  auto sx = [&](double x) { return ml + plot_w * (x - x_lo) / (x_hi - x_lo); };
  auto sy = [&](double y) { return mt + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // frame and ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / ticks;
    const double fy = y_lo + (y_hi - y_lo) * i / ticks;
    os << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt + plot_h << "\" x2=\"" << sx(fx)
       << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(fx) << "\" y=\"" << mt + plot_h + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(fx) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml
       << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(fy) << "</text>\n";
  }
  os << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
     << "transform=\"rotate(-90 16 " << mt + plot_h / 2 << ")\">" << y_label
     << "</text>\n";

  // error bars under the line
  for (const auto& p : points) {
    if (p.err <= 0) continue;
    os << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y - p.err) << "\" x2=\""
       << sx(p.x) << "\" y2=\"" << sy(p.y + p.err)
       << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
  }
  if (points.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : points) os << sx(p.x) << ',' << sy(p.y) << ' ';
    os << "\"/>\n";
  }
  for (const auto& p : points)
    os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
       << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  os << "</svg>\n";
}

}  // namespace waistlab
