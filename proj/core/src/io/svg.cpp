#include "magan/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace magan::io {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

struct Frame {
    Range x, y;
    double px(double v) const { return kMarginLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kMarginLeft - kMarginRight); }
    double py(double v) const { return kHeight - kMarginBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kMarginTop - kMarginBottom); }
};

const char* default_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    return palette[i % 6];
}

void axes(std::ostringstream& out, const Frame& f, const PlotData& data) {
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
        << num(y0 - y1) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
        const double yv = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
        out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(y0 + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
            << tick(xv) << "</text>\n";
        out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
            << tick(yv) << "</text>\n";
    }
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << escape(data.title)
        << "</text>\n";
    out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 12) << "\" font-size=\"12\" text-anchor=\"middle\">"
        << escape(data.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << num((y0 + y1) / 2) << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num((y0 + y1) / 2) << ")\">" << escape(data.y_label) << "</text>\n";
}

void legend_entry(std::ostringstream& out, std::size_t row, const std::string& color, const std::string& label) {
    const double x = kWidth - kMarginRight + 12, y = kMarginTop + 10 + 18.0 * static_cast<double>(row);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\"" << escape(color)
        << "\"/>\n";
    out << "<text x=\"" << num(x + 16) << "\" y=\"" << num(y + 1) << "\" font-size=\"11\">" << escape(label) << "</text>\n";
}

}  // namespace

std::string svg_document(PlotKind kind, const PlotData& data) {
    std::size_t points = 0;
    for (const auto& s : data.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("svg: series '" + s.label + "' has unequal x/y lengths");
        points += s.x.size();
    }
    if (points == 0) throw std::invalid_argument("svg: nothing to draw");

    Frame f;
    for (const auto& s : data.series) {
        for (double v : s.x) f.x.add(v);
        for (double v : s.y) f.y.add(v);
    }
    if (kind == PlotKind::curves) {
        for (const auto& h : data.hlines) f.y.add(h.y);
    }
    f.x.finish();
    f.y.finish();

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    axes(out, f, data);

    std::size_t row = 0;
    for (std::size_t si = 0; si < data.series.size(); ++si) {
        const auto& s = data.series[si];
        const std::string color = s.color.empty() ? default_color(si) : s.color;
        if (kind == PlotKind::scatter) {
            out << "<g fill=\"" << escape(color) << "\" fill-opacity=\"0.6\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << "<circle cx=\"" << num(f.px(s.x[i])) << "\" cy=\"" << num(f.py(s.y[i])) << "\" r=\"2\"/>\n";
            }
            out << "</g>\n";
        } else if (!s.x.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << escape(color) << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i != 0) out << ' ';
                out << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i]));
            }
            out << "\"/>\n";
        }
        legend_entry(out, row++, color, s.label);
    }
    if (kind == PlotKind::curves) {
        for (const auto& h : data.hlines) {
            out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(f.py(h.y)) << "\" x2=\""
                << num(kWidth - kMarginRight) << "\" y2=\"" << num(f.py(h.y))
                << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
            legend_entry(out, row++, "black", h.label);
        }
    }
    out << "</svg>\n";
    return out.str();
}

void render_svg(PlotKind kind, const PlotData& data, const std::filesystem::path& path) {
    const std::string doc = svg_document(kind, data);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace magan::io
