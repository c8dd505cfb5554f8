#pragma once

#include <string>
#include <vector>

namespace dynaedit {

struct PlotSeries {
  std::string label;
  std::vector<double> values;
};

// Polyline per series against its index.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::vector<PlotSeries>& series);

// One column of dots per series, for per-seed metric distributions.
std::string strip_plot_svg(const std::string& title, const std::vector<PlotSeries>& series);

}  // namespace dynaedit
