#include "forage/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "forage/textio.hpp"

namespace forage {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_coord(double v) {
    // two decimals is plenty for pixel coordinates and keeps files small
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

// round the axis bound up to a tidy tick step
double nice_upper(double v) {
    if (v <= 0.0) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (v <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series, int width,
                           int height) {
    const double ml = 64, mr = 16, mt = 40, mb = 48;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double x_max = 1.0, y_max = 1.0;
    for (const ChartSeries& s : series) {
        for (auto [x, y] : s.points) {
            x_max = std::max(x_max, x);
            y_max = std::max(y_max, y);
        }
    }
    x_max = nice_upper(x_max);
    y_max = nice_upper(y_max);

    auto px = [&](double x) { return ml + x / x_max * pw; };
    auto py = [&](double y) { return mt + ph - y / y_max * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" font-family=\"sans-serif\" "
           "font-size=\"15\" text-anchor=\"middle\">"
        << escape_xml(title) << "</text>\n";

    // axes
    svg << "<line x1=\"" << fmt_coord(ml) << "\" y1=\"" << fmt_coord(mt) << "\" x2=\""
        << fmt_coord(ml) << "\" y2=\"" << fmt_coord(mt + ph)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fmt_coord(ml) << "\" y1=\"" << fmt_coord(mt + ph)
        << "\" x2=\"" << fmt_coord(ml + pw) << "\" y2=\"" << fmt_coord(mt + ph)
        << "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double fx = x_max * t / ticks;
        const double fy = y_max * t / ticks;
        svg << "<line x1=\"" << fmt_coord(px(fx)) << "\" y1=\"" << fmt_coord(mt + ph)
            << "\" x2=\"" << fmt_coord(px(fx)) << "\" y2=\"" << fmt_coord(mt + ph + 5)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_coord(px(fx)) << "\" y=\"" << fmt_coord(mt + ph + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">"
            << fmt_double(fx) << "</text>\n";
        svg << "<line x1=\"" << fmt_coord(ml - 5) << "\" y1=\"" << fmt_coord(py(fy))
            << "\" x2=\"" << fmt_coord(ml) << "\" y2=\"" << fmt_coord(py(fy))
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_coord(ml - 8) << "\" y=\"" << fmt_coord(py(fy) + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt_double(fy) << "</text>\n";
    }
    svg << "<text x=\"" << fmt_coord(ml + pw / 2) << "\" y=\""
        << fmt_coord(mt + ph + 36)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << escape_xml(x_label) << "</text>\n";
    svg << "<text x=\"14\" y=\"" << fmt_coord(mt + ph / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 "
        << fmt_coord(mt + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[s].points)
            svg << fmt_coord(px(x)) << ',' << fmt_coord(py(y)) << ' ';
        svg << "\"/>\n";
        // legend entry
        const double ly = mt + 14 + 16 * static_cast<double>(s);
        svg << "<line x1=\"" << fmt_coord(ml + 8) << "\" y1=\"" << fmt_coord(ly - 4)
            << "\" x2=\"" << fmt_coord(ml + 28) << "\" y2=\"" << fmt_coord(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt_coord(ml + 34) << "\" y=\"" << fmt_coord(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape_xml(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace forage
