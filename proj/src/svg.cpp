#include "cfda/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cfda::svg {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void absorb(const Eigen::VectorXd& v) {
        if (v.size() == 0) return;
        lo = std::min(lo, v.minCoeff());
        hi = std::max(hi, v.maxCoeff());
    }
    void pad() {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.04 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
    double map(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

}  // namespace

const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1b6ca8", "#d1495b", "#3a7d44", "#e9a820", "#7d5ba6",
        "#00798c", "#a05c2f", "#5c5c5c", "#9dbebb"};
    return colors;
}

std::string panel_figure(const std::vector<Panel>& panels, int columns,
                         int panel_width, int panel_height) {
    const int n = static_cast<int>(panels.size());
    const int cols = std::max(1, columns);
    const int rows = (n + cols - 1) / cols;
    const int pad_left = 46, pad_right = 12, pad_top = 26, pad_bottom = 26;
    const int width = cols * panel_width;
    const int height = rows * panel_height;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
       << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\"/>\n";

    for (int p = 0; p < n; ++p) {
        const int row = p / cols, col = p % cols;
        const double x0 = col * panel_width + pad_left;
        const double x1 = (col + 1) * panel_width - pad_right;
        const double y0 = row * panel_height + pad_top;
        const double y1 = (row + 1) * panel_height - pad_bottom;
        const Panel& panel = panels[p];

        Range xr, yr;
        for (const auto& s : panel.series) {
            xr.absorb(s.x);
            yr.absorb(s.y);
        }
        xr.pad();
        yr.pad();

        os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
           << fmt(x1 - x0) << "\" height=\"" << fmt(y1 - y0)
           << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.8\"/>\n";
        os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(y0 - 8)
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
           << panel.title << "</text>\n";

        for (const auto& s : panel.series) {
            if (s.x.size() < 2) continue;
            os << "<polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"" << fmt(s.width) << "\" points=\"";
            for (Eigen::Index i = 0; i < s.x.size(); ++i) {
                if (i) os << ' ';
                os << fmt(xr.map(s.x(i), x0, x1)) << ','
                   << fmt(yr.map(s.y(i), y1, y0));
            }
            os << "\"/>\n";
        }

        os << "<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y1 + 16)
           << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_tick(xr.lo)
           << "</text>\n";
        os << "<text x=\"" << fmt(x1) << "\" y=\"" << fmt(y1 + 16)
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
           << fmt_tick(xr.hi) << "</text>\n";
        os << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(y1)
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
           << fmt_tick(yr.lo) << "</text>\n";
        os << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(y0 + 10)
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
           << fmt_tick(yr.hi) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string scatter_figure(const std::vector<Marker>& markers, const std::string& x_label,
                           const std::string& y_label, int width, int height) {
    const double x0 = 56, y0 = 24;
    const double x1 = width - 16, y1 = height - 44;

    Range xr, yr;
    for (const auto& m : markers) {
        xr.lo = std::min(xr.lo, m.x);
        xr.hi = std::max(xr.hi, m.x);
        yr.lo = std::min(yr.lo, m.y);
        yr.hi = std::max(yr.hi, m.y);
    }
    xr.pad();
    yr.pad();

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
       << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\"/>\n";
    os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
       << fmt(x1 - x0) << "\" height=\"" << fmt(y1 - y0)
       << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.8\"/>\n";

    for (const auto& m : markers) {
        const double px = xr.map(m.x, x0, x1);
        const double py = yr.map(m.y, y1, y0);
        os << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
           << "\" r=\"4\" fill=\"" << m.color << "\"/>\n";
        if (!m.label.empty()) {
            os << "<text x=\"" << fmt(px + 6) << "\" y=\"" << fmt(py - 4)
               << "\" font-family=\"sans-serif\" font-size=\"10\">" << m.label
               << "</text>\n";
        }
    }

    os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(y1 + 30)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
       << x_label << "</text>\n";
    os << "<text x=\"14\" y=\"" << fmt((y0 + y1) / 2)
       << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
       << fmt((y0 + y1) / 2) << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
    os << "<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y1 + 16)
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_tick(xr.lo)
       << "</text>\n";
    os << "<text x=\"" << fmt(x1) << "\" y=\"" << fmt(y1 + 16)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
       << fmt_tick(xr.hi) << "</text>\n";
    os << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(y1)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
       << fmt_tick(yr.lo) << "</text>\n";
    os << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(y0 + 10)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
       << fmt_tick(yr.hi) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace cfda::svg
