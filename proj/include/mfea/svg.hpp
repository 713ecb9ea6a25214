#pragma once

#include <string>
#include <utility>
#include <vector>

// Minimal self-contained SVG line charts. One <polyline> per series; axes,
// ticks, and legend swatches are drawn with <line> elements so a polyline
// count equals the series count.

namespace svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<Series> series;

    std::string render() const;
    void render_to_file(const std::string& path) const;
};

}  // namespace svg
