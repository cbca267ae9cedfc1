#include "qd/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace qd {

SvgPlot::SvgPlot(int width, int height) : w_(width), h_(height) {}

void SvgPlot::bbox(cplx z) {
    if (!has_bbox_) {
        min_x_ = max_x_ = z.real();
        min_y_ = max_y_ = z.imag();
        has_bbox_ = true;
        return;
    }
    min_x_ = std::min(min_x_, z.real());
    max_x_ = std::max(max_x_, z.real());
    min_y_ = std::min(min_y_, z.imag());
    max_y_ = std::max(max_y_, z.imag());
}

void SvgPlot::add_polyline(const std::vector<cplx>& pts, const std::string& css_class,
                           const std::string& id) {
    for (cplx p : pts) bbox(p);
    lines_.push_back({pts, css_class, id});
}

void SvgPlot::add_marker(cplx z, const std::string& css_class, const std::string& id) {
    bbox(z);
    markers_.push_back({z, css_class, id});
}

void SvgPlot::extend_view(cplx z) { bbox(z); }

static std::string fmt(double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.9g", v);
    return tmp;
}

// fixed palette, assigned to css classes in order of first appearance
static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#17becf", "#7f7f7f", "#e377c2"};

std::string SvgPlot::render() const {
    double lo_x = has_bbox_ ? min_x_ : -1.0, hi_x = has_bbox_ ? max_x_ : 1.0;
    double lo_y = has_bbox_ ? min_y_ : -1.0, hi_y = has_bbox_ ? max_y_ : 1.0;
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    const double pad = 0.2 * span;
    // SVG y grows downward; plot Im z upward by negating y throughout
    const double vx = lo_x - pad;
    const double vy = -(hi_y + pad);
    const double vw = (hi_x - lo_x) + 2 * pad;
    const double vh = (hi_y - lo_y) + 2 * pad;
    const double stroke = (span + 2 * pad) / 300.0;
    const double radius = (span + 2 * pad) / 100.0;

    std::vector<std::string> classes;
    auto note_class = [&](const std::string& c) {
        if (std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
    };
    for (const auto& l : lines_) note_class(l.cls);
    for (const auto& m : markers_) note_class(m.cls);

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
         "\" height=\"" + std::to_string(h_) + "\" viewBox=\"" + fmt(vx) + " " + fmt(vy) + " " +
         fmt(vw) + " " + fmt(vh) + "\">\n";
    s += "<defs><style>\n";
    s += "polyline { fill: none; stroke-width: " + fmt(stroke) + "; }\n";
    s += "circle { stroke: none; }\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        const char* col = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
        s += "." + classes[i] + " { stroke: " + col + "; fill: " + col + "; }\n";
    }
    s += "</style></defs>\n";
    for (const auto& l : lines_) {
        s += "<polyline class=\"" + l.cls + "\" id=\"" + l.id + "\" points=\"";
        for (size_t i = 0; i < l.pts.size(); ++i) {
            if (i) s += ' ';
            s += fmt(l.pts[i].real()) + "," + fmt(-l.pts[i].imag());
        }
        s += "\"/>\n";
    }
    for (const auto& m : markers_) {
        s += "<circle class=\"" + m.cls + "\" id=\"" + m.id + "\" cx=\"" + fmt(m.z.real()) +
             "\" cy=\"" + fmt(-m.z.imag()) + "\" r=\"" + fmt(radius) + "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

void SvgPlot::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("svg: cannot open " + path);
    f << render();
}

} // namespace qd
