#include "optpump/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "optpump/harness/csv.hpp"

namespace optpump::harness {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kColors[] = {"#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#2e4053"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* dash(LineStyle s) {
    switch (s) {
    case LineStyle::Solid: return "";
    case LineStyle::Dashed: return " stroke-dasharray=\"8,5\"";
    case LineStyle::DotDash: return " stroke-dasharray=\"10,4,2,4\"";
    case LineStyle::Dotted: return " stroke-dasharray=\"2,4\"";
    }
    return "";
}

double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

} // namespace

std::string render_svg(const Chart& chart) {
    Range xr, yr;
    for (const auto& s : chart.series) {
        for (const double v : s.x) xr.include(v);
        for (const double v : s.y) yr.include(v);
    }
    xr.finish();
    yr.finish();
    if (yr.lo > 0.0 && yr.lo < 0.2 * yr.hi) yr.lo = 0.0;
    const double pad = 0.04 * (yr.hi - yr.lo);
    yr.hi += pad;
    if (yr.lo != 0.0) yr.lo -= pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(chart.title) + "</text>\n";
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = nice_step(xr.hi - xr.lo, 8);
    for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
        const double x = px(v);
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
               num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 20) +
               "\" text-anchor=\"middle\" font-size=\"12\">" + tick_label(v) + "</text>\n";
    }
    const double ys = nice_step(yr.hi - yr.lo, 6);
    for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
        const double y = py(v);
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
               num(y) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
               "\" text-anchor=\"end\" font-size=\"12\">" + tick_label(v) + "</text>\n";
    }
    out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + escape(chart.x_label) + "</text>\n";
    out += "<text x=\"20\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
           num(kTop + ph / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* color = kColors[i % std::size(kColors)];
        // Long traces are thinned to keep the document small.
        const std::size_t n = std::min(s.x.size(), s.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.8\"" + dash(s.style) +
               " points=\"";
        for (std::size_t k = 0; k < n; k += stride) out += num(px(s.x[k])) + "," + num(py(s.y[k])) + " ";
        if (n > 0 && (n - 1) % stride != 0) out += num(px(s.x[n - 1])) + "," + num(py(s.y[n - 1]));
        out += "\"/>\n";

    }

    // Legend in a boxed panel drawn over the curves, at mid-height on the right
    // where both population and spectrum plots are flat.
    const double box_h = 12.0 + 20.0 * static_cast<double>(chart.series.size());
    const double lx = kLeft + pw - 200;
    const double top = kTop + 0.4 * ph - 0.5 * box_h;
    out += "<rect x=\"" + num(lx - 8) + "\" y=\"" + num(top) + "\" width=\"196\" height=\"" + num(box_h) +
           "\" fill=\"white\" fill-opacity=\"0.9\" stroke=\"#999999\"/>\n";
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* color = kColors[i % std::size(kColors)];
        const double ly = top + 16 + 20.0 * static_cast<double>(i);
        out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 36) + "\" y2=\"" + num(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"1.8\"" + dash(s.style) + "/>\n";
        out += "<text x=\"" + num(lx + 44) + "\" y=\"" + num(ly + 4) + "\" font-size=\"12\">" + escape(s.label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void emit_plot(const Chart& chart, const std::filesystem::path& path) { write_text(path, render_svg(chart)); }

} // namespace optpump::harness
