#pragma once

#include <string>
#include <vector>

namespace nlsv {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = true;
    bool dashed = false;
};

/// Standalone log-log SVG; non-positive points are skipped.
std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label);

}  // namespace nlsv
