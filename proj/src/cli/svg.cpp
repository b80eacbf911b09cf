#include "bridgekit/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "bridgekit/error.hpp"

namespace bridgekit::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 30.0;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        // Flat curves (a constant variance) still need a visible band.
        const double span = hi - lo;
        const double p = span > 0.0 ? 0.05 * span : std::max(0.05 * std::abs(lo), 0.05);
        lo -= p;
        hi += p;
    }
};

const char* dash(Stroke s) {
    switch (s) {
        case Stroke::dashed: return " stroke-dasharray=\"8,4\"";
        case Stroke::dotted: return " stroke-dasharray=\"2,4\"";
        case Stroke::solid: break;
    }
    return "";
}

const char* colour(std::size_t i) {
    static const char* palette[] = {"#1f3b73", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e"};
    return palette[i % 5];
}

}  // namespace

void write_svg(const std::string& path, const std::vector<Panel>& panels) {
    if (panels.empty()) throw InputError("write_svg: nothing to draw");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write '{}'", path));

    out << fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        kWidth, kHeight);

    const double slot = kHeight / static_cast<double>(panels.size());
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Panel& panel = panels[p];
        Range rx, ry;
        for (const auto& s : panel.series) {
            for (double v : s.x) rx.add(v);
            for (double v : s.y) ry.add(v);
        }
        rx.pad();
        ry.pad();
        const double top = static_cast<double>(p) * slot + kMarginTop;
        const double bottom = static_cast<double>(p + 1) * slot - kMarginBottom;
        const double left = kMarginLeft;
        const double right = kWidth - kMarginRight;
        auto sx = [&](double x) { return left + (x - rx.lo) / (rx.hi - rx.lo) * (right - left); };
        auto sy = [&](double y) { return bottom - (y - ry.lo) / (ry.hi - ry.lo) * (bottom - top); };

        out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
                           left, top, right - left, bottom - top);
        out << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n", left,
                           top - 8.0, panel.title);
        for (int k = 0; k <= 4; ++k) {
            const double yv = ry.lo + (ry.hi - ry.lo) * k / 4.0;
            const double xv = rx.lo + (rx.hi - rx.lo) * k / 4.0;
            out << fmt::format(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                left - 4.0, sy(yv) + 3.0, yv);
            out << fmt::format(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{:.3g}</text>\n",
                sx(xv), bottom + 12.0, xv);
        }
        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const Series& ser = panel.series[s];
            std::string pts;
            for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
                if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
                pts += fmt::format("{:.2f},{:.2f} ", sx(ser.x[i]), sy(ser.y[i]));
            }
            out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{} points=\"{}\"/>\n",
                               colour(s), dash(ser.stroke), pts);
            out << fmt::format(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{}\">{}</text>\n",
                right - 150.0, top + 14.0 + 13.0 * static_cast<double>(s), colour(s), ser.label);
        }
    }
    out << "</svg>\n";
    if (!out) throw InputError(fmt::format("write to '{}' failed", path));
}

}  // namespace bridgekit::cli
