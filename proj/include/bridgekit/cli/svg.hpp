#pragma once

#include <string>
#include <vector>

namespace bridgekit::cli {

enum class Stroke { solid, dashed, dotted };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    Stroke stroke = Stroke::solid;
};

struct Panel {
    std::string title;
    std::vector<Series> series;
};

/// Panels stacked vertically in a fixed 800x600 viewport, each with autoscaled axes.
void write_svg(const std::string& path, const std::vector<Panel>& panels);

}  // namespace bridgekit::cli
