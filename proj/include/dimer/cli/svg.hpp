#pragma once

#include <array>
#include <string>
#include <vector>

namespace dimer::cli {

using Pt = std::array<double, 2>;

// Minimal SVG writer.  User units are domain coordinates with y negated, so a
// point (u, v) is written as "u,-v"; stroke widths and dot radii are in pixels.
class Svg {
  public:
    Svg(double x0, double x1, double y0, double y1, int width = 600);

    void comment(const std::string& text);
    void polyline(const std::vector<Pt>& pts, const std::string& colour, double width, bool closed = false);
    void polygon(const std::vector<Pt>& pts, const std::string& fill, const std::string& colour = "none",
                 double width = 0.0);
    // Disjoint segments as one path.
    void segments(const std::vector<std::array<Pt, 2>>& segs, const std::string& colour, double width);
    void dot(Pt p, double r, const std::string& fill);
    void text(Pt p, const std::string& s, double size = 12.0);
    void group(const std::string& id);
    void end_group();

    std::string str() const;

  private:
    std::string xy(Pt p) const;
    std::string stroke(const std::string& colour, double px) const;
    double x0_, y1_, vw_, vh_, scale_;
    int w_, h_;
    std::string body_;
};

std::string fmt(double x);

}  // namespace dimer::cli
