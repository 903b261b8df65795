#pragma once

#include <string>
#include <vector>

namespace grasp::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Series> series;
};

/// Standalone SVG document: axes with tick labels, one polyline per series, a legend.
std::string render_svg(const LineChart& chart);

}  // namespace grasp::cli
