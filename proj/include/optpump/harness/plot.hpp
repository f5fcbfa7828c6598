#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace optpump::harness {

enum class LineStyle { Solid, Dashed, DotDash, Dotted };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    LineStyle style = LineStyle::Solid;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

// Self-contained SVG line chart with axes, ticks and a legend.
std::string render_svg(const Chart& chart);

// Throws IoError.
void emit_plot(const Chart& chart, const std::filesystem::path& path);

} // namespace optpump::harness
