#include "dynaedit/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dynaedit {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
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

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range value_range(const std::vector<PlotSeries>& series) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) return {};
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string frame(const std::string& title, Range r, const std::string& x_label) {
  const double plot_bottom = kHeight - kBottom;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
       "</text>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(plot_bottom) + "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
       num(plot_bottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(plot_bottom) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) + "\" text-anchor=\"end\">" + label_num(r.hi) +
       "</text>\n";
  s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(plot_bottom) + "\" text-anchor=\"end\">" + label_num(r.lo) +
       "</text>\n";
  if (!x_label.empty()) {
    s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  }
  return s;
}

double y_of(double v, Range r) {
  const double plot_bottom = kHeight - kBottom;
  return plot_bottom - (v - r.lo) / (r.hi - r.lo) * (plot_bottom - kTop);
}

std::string legend(const std::vector<PlotSeries>& series) {
  std::string s;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double y = kTop + 18.0 * static_cast<double>(k);
    const char* color = kColors[k % std::size(kColors)];
    s += "<rect x=\"" + num(kWidth - kRight + 12) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
         color + "\"/>\n";
    s += "<text x=\"" + num(kWidth - kRight + 28) + "\" y=\"" + num(y) + "\">" + escape(series[k].label) + "</text>\n";
  }
  return s;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::vector<PlotSeries>& series) {
  const Range r = value_range(series);
  std::string s = frame(title, r, x_label);
  std::size_t longest = 1;
  for (const auto& ser : series) longest = std::max(longest, ser.values.size());
  const double span = kWidth - kRight - kLeft;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& v = series[k].values;
    if (v.empty()) continue;
    std::string points;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) continue;
      const double x = kLeft + span * (longest > 1 ? static_cast<double>(i) / static_cast<double>(longest - 1) : 0.5);
      points += num(x) + "," + num(y_of(v[i], r)) + " ";
    }
    s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(kColors[k % std::size(kColors)]) +
         "\" points=\"" + points + "\"/>\n";
  }
  s += legend(series);
  s += "</svg>\n";
  return s;
}

std::string strip_plot_svg(const std::string& title, const std::vector<PlotSeries>& series) {
  // Each series is rescaled to its own range so metrics of different
  // magnitude share one panel; the legend carries the ranges.
  std::vector<PlotSeries> labelled;
  std::string s = frame(title, Range{0.0, 1.0}, "");
  const double span = kWidth - kRight - kLeft;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Range r = value_range({series[k]});
    const double x = kLeft + span * (static_cast<double>(k) + 0.5) / static_cast<double>(series.size());
    for (double v : series[k].values) {
      if (!std::isfinite(v)) continue;
      s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y_of((v - r.lo) / (r.hi - r.lo), Range{0.0, 1.0})) +
           "\" r=\"3\" fill-opacity=\"0.6\" fill=\"" + std::string(kColors[k % std::size(kColors)]) + "\"/>\n";
    }
    labelled.push_back({series[k].label + " [" + label_num(r.lo) + ", " + label_num(r.hi) + "]", {}});
  }
  s += legend(labelled);
  s += "</svg>\n";
  return s;
}

}  // namespace dynaedit
