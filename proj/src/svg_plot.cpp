#include "nlsv/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nlsv {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
            x0 = std::min(x0, std::log10(s.x[i]));
            x1 = std::max(x1, std::log10(s.x[i]));
            y0 = std::min(y0, std::log10(s.y[i]));
            y1 = std::max(y1, std::log10(s.y[i]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    x0 = std::floor(x0 - 0.05), x1 = std::ceil(x1 + 0.05);
    y0 = std::floor(y0 - 0.05), y1 = std::ceil(y1 + 0.05);

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * pw; };
    auto py = [&](double ly) { return kTop + (y1 - ly) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
    for (double d = x0; d <= x1 + 1e-9; d += 1) {
        os << "<line x1=\"" << fmt(px(d)) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px(d)) << "\" y2=\""
           << fmt(kTop + ph) << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << fmt(px(d)) << "\" y=\"" << fmt(kTop + ph + 18) << "\" text-anchor=\"middle\">1e"
           << static_cast<int>(d) << "</text>\n";
    }
    for (double d = y0; d <= y1 + 1e-9; d += 1) {
        os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(d)) << "\" x2=\"" << fmt(kLeft + pw) << "\" y2=\""
           << fmt(py(d)) << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(d) + 4) << "\" text-anchor=\"end\">1e"
           << static_cast<int>(d) << "</text>\n";
    }
    os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 16) << "\" text-anchor=\"middle\">"
       << escape(x_label) << "</text>\n";
    os << "<text transform=\"translate(20," << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(y_label) << "</text>\n";

    double legend_y = kTop + 16;
    for (const auto& s : series) {
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
            points += fmt(px(std::log10(s.x[i]))) + "," + fmt(py(std::log10(s.y[i]))) + " ";
        }
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
           << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
                os << "<circle cx=\"" << fmt(px(std::log10(s.x[i]))) << "\" cy=\"" << fmt(py(std::log10(s.y[i])))
                   << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
            }
        os << "<line x1=\"" << fmt(kLeft + pw - 170) << "\" y1=\"" << fmt(legend_y - 4) << "\" x2=\""
           << fmt(kLeft + pw - 145) << "\" y2=\"" << fmt(legend_y - 4) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        os << "<text x=\"" << fmt(kLeft + pw - 140) << "\" y=\"" << fmt(legend_y) << "\">" << escape(s.label)
           << "</text>\n";
        legend_y += 18;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace nlsv
