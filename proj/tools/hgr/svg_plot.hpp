#pragma once

#include <string>
#include <vector>

namespace hgr::cli {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> values;
};

// Minimal static line chart: one panel per series group, x = sample
// index, y fixed to [0, 1.05]. Returns a complete SVG document.
std::string render_line_chart_svg(const std::string& title,
                                  const std::vector<std::vector<Series>>& panels);

} // namespace hgr::cli
