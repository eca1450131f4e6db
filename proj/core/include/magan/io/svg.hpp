#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace magan::io {

enum class PlotKind { scatter, curves };

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Dashed horizontal reference line, e.g. a fixed margin.
struct HorizontalLine {
    std::string label;
    double y = 0.0;
};

struct PlotData {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<HorizontalLine> hlines;  // curves only
};

/// Self-contained SVG document. Scatter draws one <circle> per point; curves
/// draw one <polyline> per series with one vertex per point. Throws
/// std::invalid_argument when there is nothing to draw.
std::string svg_document(PlotKind kind, const PlotData& data);
void render_svg(PlotKind kind, const PlotData& data, const std::filesystem::path& path);

}  // namespace magan::io
