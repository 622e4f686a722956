#include "hht/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hht/error.hpp"

namespace hht::plot {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
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
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Box {
    double x, y, w, h;
};

void range_of(const std::vector<const Line*>& lines, double& lo, double& hi) {
    lo = INFINITY;
    hi = -INFINITY;
    for (const auto* l : lines) {
        for (double v : l->y) {
            if (!std::isfinite(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void draw_panel(std::ostringstream& svg, const Box& box, const std::vector<const Line*>& lines, std::size_t samples) {
    double lo = 0.0;
    double hi = 1.0;
    range_of(lines, lo, hi);
    svg << "<rect x=\"" << num(box.x) << "\" y=\"" << num(box.y) << "\" width=\"" << num(box.w) << "\" height=\""
        << num(box.h) << "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg << "<text x=\"" << num(box.x - 4) << "\" y=\"" << num(box.y + 10)
        << "\" font-size=\"10\" text-anchor=\"end\">" << tick(hi) << "</text>\n";
    svg << "<text x=\"" << num(box.x - 4) << "\" y=\"" << num(box.y + box.h)
        << "\" font-size=\"10\" text-anchor=\"end\">" << tick(lo) << "</text>\n";

    const double xs = samples > 1 ? box.w / static_cast<double>(samples - 1) : 0.0;
    for (const auto* l : lines) {
        svg << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << escape(l->color) << "\" points=\"";
        for (std::size_t i = 0; i < l->y.size(); ++i) {
            if (!std::isfinite(l->y[i])) continue;
            const double px = box.x + xs * static_cast<double>(i);
            const double py = box.y + box.h * (1.0 - (l->y[i] - lo) / (hi - lo));
            svg << num(px) << ',' << num(py) << ' ';
        }
        svg << "\"/>\n";
    }
}

std::string header(int width, int height, const std::string& title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">" << escape(title)
      << "</text>\n";
    return s.str();
}

}  // namespace

std::string line_chart(const std::string& title, const std::vector<Line>& lines, int width, int height) {
    std::ostringstream svg;
    svg << header(width, height, title);
    std::size_t samples = 0;
    std::vector<const Line*> ptrs;
    for (const auto& l : lines) {
        samples = std::max(samples, l.y.size());
        ptrs.push_back(&l);
    }
    const Box box{70.0, 30.0, width - 90.0, height - 70.0};
    draw_panel(svg, box, ptrs, samples);
    double lx = box.x;
    for (const auto& l : lines) {
        svg << "<rect x=\"" << num(lx) << "\" y=\"" << height - 22 << "\" width=\"12\" height=\"3\" fill=\""
            << escape(l.color) << "\"/>\n";
        svg << "<text x=\"" << num(lx + 16) << "\" y=\"" << height - 17 << "\" font-size=\"11\">" << escape(l.label)
            << "</text>\n";
        lx += 30.0 + 7.0 * static_cast<double>(l.label.size());
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string stacked_chart(const std::string& title, const std::vector<Line>& panels, int width, int panel_height) {
    const int height = 30 + static_cast<int>(panels.size()) * (panel_height + 10) + 10;
    std::ostringstream svg;
    svg << header(width, height, title);
    std::size_t samples = 0;
    for (const auto& p : panels) samples = std::max(samples, p.y.size());
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const Box box{70.0, 30.0 + static_cast<double>(k) * (panel_height + 10), width - 90.0,
                      static_cast<double>(panel_height)};
        draw_panel(svg, box, {&panels[k]}, samples);
        svg << "<text x=\"" << num(box.x + 6) << "\" y=\"" << num(box.y + 14) << "\" font-size=\"11\">"
            << escape(panels[k].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const std::filesystem::path& path, const std::string& svg) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << svg;
}

}  // namespace hht::plot
