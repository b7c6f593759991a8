#include "hgr/svg_plot.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>

namespace hgr::cli {

namespace {

void appendf(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out += buf;
}

} // namespace

std::string render_line_chart_svg(const std::string& title,
                                  const std::vector<std::vector<Series>>& panels) {
    const int width = 720;
    const int panel_height = 240;
    const int margin_left = 50, margin_right = 20, margin_top = 40, margin_bottom = 30;
    const int height = margin_top + static_cast<int>(panels.size()) * panel_height + 10;

    std::string svg;
    appendf(svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
            "font-family=\"sans-serif\" font-size=\"12\">\n",
            width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    appendf(svg, "<text x=\"%d\" y=\"22\" font-size=\"16\">%s</text>\n", margin_left, title.c_str());

    for (std::size_t p = 0; p < panels.size(); ++p) {
        int top = margin_top + static_cast<int>(p) * panel_height;
        int plot_h = panel_height - margin_bottom;
        int plot_w = width - margin_left - margin_right;
        double y_max = 1.05;

        std::size_t n = 0;
        for (const auto& s : panels[p])
            n = std::max(n, s.values.size());
        if (n < 2)
            n = 2;

        // frame and horizontal gridlines at 0, 0.5, 1
        appendf(svg, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                     "stroke=\"#888\"/>\n",
                margin_left, top, plot_w, plot_h);
        for (double gy : {0.0, 0.5, 1.0}) {
            int y = top + static_cast<int>((1.0 - gy / y_max) * plot_h);
            appendf(svg, "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#ddd\"/>\n",
                    margin_left, y, margin_left + plot_w, y);
            appendf(svg, "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%.1f</text>\n",
                    margin_left - 6, y + 4, gy);
        }

        int legend_x = margin_left + 8;
        for (const auto& s : panels[p]) {
            std::string points;
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                double x = margin_left + static_cast<double>(i) / static_cast<double>(n - 1) * plot_w;
                double v = std::clamp(s.values[i], 0.0, y_max);
                double y = top + (1.0 - v / y_max) * plot_h;
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x, y);
                points += buf;
            }
            appendf(svg, "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\"/>\n",
                    points.c_str(), s.color.c_str());
            appendf(svg, "<text x=\"%d\" y=\"%d\" fill=\"%s\">%s</text>\n", legend_x, top + 16,
                    s.color.c_str(), s.label.c_str());
            legend_x += 60;
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace hgr::cli
