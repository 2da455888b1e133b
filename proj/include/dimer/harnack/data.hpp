#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "dimer/riemann/schottky.hpp"

namespace dimer::harnack {

using riemann::Circle;

enum class Lattice { Square, Hexagonal };
enum class Cover { None, Ramified, Unramified };

// Train-track family and, on double covers (and the square lattice), the
// sheet sign.  sign is 0 for the base hexagonal data.
enum class Family { Alpha, Beta, Gamma };

struct Marked {
    double angle = 0.0;
    Family family = Family::Alpha;
    int sign = 0;
    int index = 0;
    cplx point() const { return std::polar(1.0, angle); }
};

struct HarnackData {
    Lattice lattice = Lattice::Square;
    int n = 1;
    std::vector<Circle> circles;
    Cover cover = Cover::None;
    int central = -1;                       // unramified: index of the circle centered at 0
    std::vector<Marked> points;
    std::array<double, 3> sides{1.0, 1.0, 1.0};
    std::vector<double> D;

    int genus() const { return static_cast<int>(circles.size()); }
    bool on_cover() const { return lattice == Lattice::Hexagonal && cover != Cover::None; }
    std::vector<double> angles(Family f, int sign) const;
    std::string describe(const Marked& m) const;
};

double wrap_angle(double t);

// Cyclic order of marked families around S^1: each family/sign group must
// occupy one arc and the arcs must follow this order.
std::vector<std::pair<Family, int>> cluster_order(const HarnackData& S);

// Throws ClusteringViolation naming an offending quadruple (or triple).
void check_clustering(const HarnackData& S);
void check_cover(const HarnackData& S);
void validate(const HarnackData& S);

HarnackData parse_harnack(const nlohmann::json& doc);
HarnackData parse_harnack_text(const std::string& text);
nlohmann::json to_json(const HarnackData& S);

// Canonical fixtures used by the CLI presets and the tests.
HarnackData uniform_square(int n = 1);
HarnackData uniform_hexagon_ramified();
HarnackData symmetric_hexagon_unramified(double central_radius = 0.3);

}  // namespace dimer::harnack
