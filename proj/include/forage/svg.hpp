#pragma once

#include <string>
#include <utility>
#include <vector>

namespace forage {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Static SVG 1.1 line chart: axes, tick labels, legend. No plotting
// dependency; output bytes are deterministic.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series,
                           int width = 720, int height = 480);

} // namespace forage
