#include "dimer/cli/svg.hpp"

#include <cmath>
#include <cstdio>

namespace dimer::cli {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", std::abs(x) < 5e-12 ? 0.0 : x);
    return buf;
}

Svg::Svg(double x0, double x1, double y0, double y1, int width) {
    const double pad = 0.04 * std::max(x1 - x0, y1 - y0);
    x0_ = x0 - pad;
    y1_ = y1 + pad;
    vw_ = x1 - x0 + 2 * pad;
    vh_ = y1 - y0 + 2 * pad;
    scale_ = width / vw_;
    w_ = width;
    h_ = static_cast<int>(std::lround(vh_ * scale_));
}

std::string Svg::xy(Pt p) const { return fmt(p[0]) + "," + fmt(-p[1]); }

std::string Svg::stroke(const std::string& colour, double px) const {
    return " stroke=\"" + colour + "\" stroke-width=\"" + fmt(px) + "\" vector-effect=\"non-scaling-stroke\"";
}

void Svg::comment(const std::string& text) { body_ += "<!-- " + text + " -->\n"; }

void Svg::polyline(const std::vector<Pt>& pts, const std::string& colour, double width, bool closed) {
    if (pts.size() < 2) return;
    body_ += closed ? "<polygon fill=\"none\"" : "<polyline fill=\"none\"";
    body_ += stroke(colour, width) + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + xy(pts[i]);
    body_ += "\"/>\n";
}

void Svg::polygon(const std::vector<Pt>& pts, const std::string& fill, const std::string& colour, double width) {
    body_ += "<polygon fill=\"" + fill + "\"" + stroke(colour, width) + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + xy(pts[i]);
    body_ += "\"/>\n";
}

void Svg::segments(const std::vector<std::array<Pt, 2>>& segs, const std::string& colour, double width) {
    if (segs.empty()) return;
    body_ += "<path fill=\"none\"" + stroke(colour, width) + " d=\"";
    for (const auto& s : segs) body_ += "M" + xy(s[0]) + "L" + xy(s[1]);
    body_ += "\"/>\n";
}

void Svg::dot(Pt p, double r, const std::string& fill) {
    auto c = xy(p);
    auto comma = c.find(',');
    body_ += "<circle cx=\"" + c.substr(0, comma) + "\" cy=\"" + c.substr(comma + 1) + "\" r=\"" + fmt(r / scale_) +
             "\" fill=\"" + fill + "\"/>\n";
}

void Svg::text(Pt p, const std::string& s, double size) {
    auto c = xy(p);
    auto comma = c.find(',');
    body_ += "<text x=\"" + c.substr(0, comma) + "\" y=\"" + c.substr(comma + 1) + "\" font-size=\"" + fmt(size / scale_) +
             "\">" + s + "</text>\n";
}

void Svg::group(const std::string& id) { body_ += "<g id=\"" + id + "\">\n"; }
void Svg::end_group() { body_ += "</g>\n"; }

std::string Svg::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\" viewBox=\"" + fmt(x0_) + " " + fmt(-y1_) + " " + fmt(vw_) + " " + fmt(vh_) +
           "\">\n" + body_ + "</svg>\n";
}

}  // namespace dimer::cli
