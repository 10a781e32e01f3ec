#pragma once

#include <string>
#include <vector>

namespace gsc {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_low;   // optional error band, same length as y
  std::vector<double> y_high;  // optional
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 720;
  int height = 480;
};

// Line chart with optional error bands. Output is a deterministic function of
// the spec.
void write_svg_plot(const std::string& path, const PlotSpec& spec);

}  // namespace gsc
