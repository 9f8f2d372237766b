#include "daybt/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace daybt {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 40;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string header(const std::string& title) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) +
         " " + std::to_string(kHeight) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         title + "</text>\n";
    return s;
}

} // namespace

std::string svg_equity_chart(const std::string& title, const std::vector<NamedCurve>& curves) {
    std::string s = header(title);
    double xmin = 0, xmax = 1, ymin = 1e300, ymax = -1e300;
    bool first = true;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            const double x = static_cast<double>(p.date.serial());
            if (first) {
                xmin = xmax = x;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, p.value);
            ymax = std::max(ymax, p.value);
        }
    }
    if (first) return s + "</svg>\n";
    if (ymax <= ymin) ymax = ymin + 1.0;
    if (xmax <= xmin) xmax = xmin + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (ymax - y) / (ymax - ymin) * plot_h; };

    // axes and horizontal grid lines
    s += "<line x1=\"" + num(px(xmin)) + "\" y1=\"" + num(py(ymin)) + "\" x2=\"" + num(px(xmax)) +
         "\" y2=\"" + num(py(ymin)) + "\" stroke=\"#333\"/>\n";
    s += "<line x1=\"" + num(px(xmin)) + "\" y1=\"" + num(py(ymin)) + "\" x2=\"" + num(px(xmin)) +
         "\" y2=\"" + num(py(ymax)) + "\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = ymin + (ymax - ymin) * i / 4.0;
        s += "<line x1=\"" + num(px(xmin)) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(px(xmax)) +
             "\" y2=\"" + num(py(y)) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + num(px(xmin) - 6) + "\" y=\"" + num(py(y) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(y) +
             "</text>\n";
    }
    // year ticks
    for (const auto& c : curves) {
        if (c.points.empty()) continue;
        int last_year = -1;
        for (const auto& p : c.points) {
            if (p.date.year != last_year) {
                last_year = p.date.year;
                const double x = px(static_cast<double>(p.date.serial()));
                s += "<text x=\"" + num(x) + "\" y=\"" + num(py(ymin) + 16) +
                     "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                     std::to_string(last_year) + "</text>\n";
            }
        }
        break; // ticks from the first curve only
    }

    std::size_t color = 0;
    for (const auto& c : curves) {
        std::string poly = "<polyline fill=\"none\" stroke=\"" +
                           std::string(kPalette[color % 6]) + "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : c.points)
            poly += num(px(static_cast<double>(p.date.serial()))) + "," + num(py(p.value)) + " ";
        poly += "\"/>\n";
        s += poly;
        s += "<text x=\"" + std::to_string(kMarginLeft + 8) + "\" y=\"" +
             std::to_string(kMarginTop + 14 + 16 * static_cast<int>(color)) +
             "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + kPalette[color % 6] +
             "\">" + c.name + "</text>\n";
        ++color;
    }
    return s + "</svg>\n";
}

std::string svg_histogram_chart(const std::string& title, const std::vector<HistogramBin>& bins,
                                double bin_width) {
    std::string s = header(title);
    if (bins.empty()) return s + "</svg>\n";
    std::uint64_t max_count = 1;
    for (const auto& b : bins) max_count = std::max(max_count, b.count);
    const double xmin = bins.front().lower_edge;
    const double xmax = bins.back().lower_edge + bin_width;
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double count) {
        return kMarginTop + plot_h - count / static_cast<double>(max_count) * plot_h;
    };
    s += "<line x1=\"" + num(px(xmin)) + "\" y1=\"" + num(kMarginTop + plot_h) + "\" x2=\"" +
         num(px(xmax)) + "\" y2=\"" + num(kMarginTop + plot_h) + "\" stroke=\"#333\"/>\n";
    for (const auto& b : bins) {
        const double x0 = px(b.lower_edge);
        const double x1 = px(b.lower_edge + bin_width);
        const double y = py(static_cast<double>(b.count));
        s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y) + "\" width=\"" + num(x1 - x0 - 0.5) +
             "\" height=\"" + num(kMarginTop + plot_h - y) +
             "\" fill=\"#1f77b4\" fill-opacity=\"0.8\"/>\n";
    }
    // a few x labels (percent)
    for (int i = 0; i <= 6; ++i) {
        const double x = xmin + (xmax - xmin) * i / 6.0;
        s += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kMarginTop + plot_h + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             num(x * 100.0) + "%</text>\n";
    }
    s += "<text x=\"" + num(px(xmin) - 6) + "\" y=\"" + num(py(static_cast<double>(max_count)) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(max_count) + "</text>\n";
    return s + "</svg>\n";
}

} // namespace daybt
