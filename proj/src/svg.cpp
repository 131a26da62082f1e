#include "opcurve/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace opcurve {

namespace {

const char* kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c",
                         "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
const char* kDashes[] = {"", "6,3", "2,2", "8,3,2,3"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

/// Tick spacing from the 1-2-5 ladder giving roughly `target` intervals.
double nice_step(double range, int target) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mult * mag >= raw) return mult * mag;
    }
    return 10.0 * mag;
}

} // namespace

void render_svg(const std::vector<NamedCurve>& curves,
                const std::vector<PlanarPoint>& points,
                const std::string& path) {
    const double width = 900, height = 600;
    const double ml = 62, mr = 170, mt = 18, mb = 46;  // plot margins

    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    auto grow = [&](double x, double y) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    };
    for (const NamedCurve& c : curves) {
        for (Eigen::Index i = 0; i < c.xs.size(); ++i) grow(c.xs[i], c.ys[i]);
    }
    for (const PlanarPoint& p : points) grow(p.x, p.y);
    if (!std::isfinite(xlo)) {
        xlo = ylo = 0.0;
        xhi = yhi = 1.0;
    }
    if (xhi == xlo) xhi = xlo + 1.0;
    if (yhi == ylo) yhi = ylo + 1.0;
    const double xpad = 0.05 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
    xlo -= xpad;
    xhi += xpad;
    ylo -= ypad;
    yhi += ypad;

    auto X = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
    auto Y = [&](double y) { return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"600\" "
           "viewBox=\"0 0 900 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"600\" fill=\"white\"/>\n";

    // axes
    svg += "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
    svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(height - mb) + "\" x2=\"" +
           px(width - mr) + "\" y2=\"" + px(height - mb) + "\"/>\n";
    svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(ml) +
           "\" y2=\"" + px(height - mb) + "\"/>\n";
    svg += "</g>\n";

    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    const double xstep = nice_step(xhi - xlo, 6);
    for (double t = std::ceil(xlo / xstep) * xstep; t <= xhi + 1e-12 * xstep; t += xstep) {
        const double gx = X(t);
        svg += "<line x1=\"" + px(gx) + "\" y1=\"" + px(height - mb) + "\" x2=\"" + px(gx) +
               "\" y2=\"" + px(height - mb + 5) + "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + px(gx) + "\" y=\"" + px(height - mb + 18) +
               "\" text-anchor=\"middle\">" + format_short(t == 0.0 ? 0.0 : t) + "</text>\n";
    }
    const double ystep = nice_step(yhi - ylo, 6);
    for (double t = std::ceil(ylo / ystep) * ystep; t <= yhi + 1e-12 * ystep; t += ystep) {
        const double gy = Y(t);
        svg += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(gy) + "\" x2=\"" + px(ml) +
               "\" y2=\"" + px(gy) + "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(gy + 4) +
               "\" text-anchor=\"end\">" + format_short(t == 0.0 ? 0.0 : t) + "</text>\n";
    }
    svg += "</g>\n";

    // curves
    size_t style = 0;
    for (const NamedCurve& c : curves) {
        const char* color = kColors[style % 8];
        const char* dash = kDashes[style % 4];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"";
        if (dash[0] != '\0') {
            svg += " stroke-dasharray=\"";
            svg += dash;
            svg += "\"";
        }
        svg += " points=\"";
        for (Eigen::Index i = 0; i < c.xs.size(); ++i) {
            if (i) svg += ' ';
            svg += px(X(c.xs[i])) + "," + px(Y(c.ys[i]));
        }
        svg += "\"/>\n";
        ++style;
    }

    // data markers
    for (const PlanarPoint& p : points) {
        svg += "<circle cx=\"" + px(X(p.x)) + "\" cy=\"" + px(Y(p.y)) +
               "\" r=\"2.5\" fill=\"#555555\"/>\n";
    }

    // legend
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    double ly = mt + 12;
    style = 0;
    for (const NamedCurve& c : curves) {
        const char* color = kColors[style % 8];
        svg += "<line x1=\"" + px(width - mr + 10) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" +
               px(width - mr + 34) + "\" y2=\"" + px(ly - 4) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + px(width - mr + 40) + "\" y=\"" + px(ly) + "\">" +
               xml_escape(c.name) + "</text>\n";
        ly += 16;
        ++style;
    }
    if (!points.empty()) {
        svg += "<circle cx=\"" + px(width - mr + 22) + "\" cy=\"" + px(ly - 4) +
               "\" r=\"2.5\" fill=\"#555555\"/>\n";
        svg += "<text x=\"" + px(width - mr + 40) + "\" y=\"" + px(ly) + "\">data</text>\n";
    }
    svg += "</g>\n</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write svg file: " + path);
    }
    out << svg;
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

} // namespace opcurve
