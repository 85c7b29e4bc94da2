#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ttrace::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct PlotOptions {
  std::string title;
  std::string x_label = "pfa";
  std::string y_label = "pfn";
  bool log_axes = false;
  /// Values below this are drawn at the floor on log axes.
  double log_floor = 1e-4;
};

/// Static line chart on the unit square (or [log_floor, 1]^2 in log mode).
std::string line_chart(const std::vector<Series>& series, const PlotOptions& opts);

}  // namespace ttrace::svg
