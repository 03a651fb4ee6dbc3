#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rr {

struct CurveSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Renders line series into a standalone SVG file with axes, ticks and a
/// legend. The y range is fixed to [0, 1]; the x range spans the data.
void write_curve_svg(const std::string& path, const std::vector<CurveSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label);

}  // namespace rr
