// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "waistlab/minkowski_content.hpp"
#include "waistlab/union_of_balls.hpp"
#include "waistlab/waist_harness.hpp"

namespace waistlab {

inline constexpr const char* kVersion = "0.1.0";

//! Shortest round-trip decimal form of x, locale independent ('.' decimal
//! point, no grouping), identical across runs and platforms with IEEE
//! doubles.
std::string format_double(double x);

//! One named pass/fail conclusion inside a run report.
struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

//! Single-document record of a CLI run.  `results` holds everything the
//! computation produced; reruns with the same config must reproduce that
//! subtree byte for byte, while wall_clock_ms is expected to vary.
struct RunReport {
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json results;
  std::vector<Verdict> verdicts;
  double wall_clock_ms = 0.0;

  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

//! CSV emitters: header row, '.' decimal separator, LF line endings.
void write_curve_csv(std::ostream& os, const VolumeCurve& curve);
void write_kp_csv(std::ostream& os, const KpReport& report);
void write_sweep_csv(std::ostream& os, const FiberSweep& sweep);

//! One data series for the plot writer.
struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  double err = 0.0;
};

//! Minimal standalone SVG: axes with tick labels, one polyline, optional
//! error bars.
void write_curve_svg(std::ostream& os, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotPoint>& points);

}  // namespace waistlab
