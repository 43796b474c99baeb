#pragma once

#include <string>
#include <vector>

#include "qfraud/metrics.hpp"

namespace qfraud {

struct PlotSeries {
  std::string name;
  std::vector<CurvePoint> points;
};

/// Minimal standalone SVG line chart with axes, tick labels and a legend.
std::string render_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                             const std::string& x_label, const std::string& y_label);

}  // namespace qfraud
