#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dimer/harnack/data.hpp"
#include "dimer/harnack/differentials.hpp"

namespace dimer::lattice {

using harnack::Family;
using harnack::Vec2;

enum class RegionType { Aztec, Hexagon };
const char* region_name(RegionType r);

// Train track with its label in the fundamental domain.  sign is +-1 for the
// square lattice and 0 for the hexagonal one.
struct Strand {
    Family family = Family::Alpha;
    int sign = 0;
    int index = 0;
    int line = 0;       // lattice line number of the track
    Vec2 dir{0.0, 0.0};  // direction in lattice coordinates
};

struct Vertex {
    bool black = false;
    Vec2 lat{0.0, 0.0};  // lattice coordinates
    Vec2 pos{0.0, 0.0};  // domain coordinates (u, v)
};

// Edge wb.  f1 is the face to the left of w -> b, f2 the one to the right.
// s1 separates {w, f2} from {b, f1}; s2 separates {w, f1} from {b, f2}.
struct Edge {
    int w = -1, b = -1;
    int s1 = -1, s2 = -1;
    int f1 = -1, f2 = -1;
};

// Bounded faces carry their edge cycle counterclockwise.  Pendant faces are
// the degree-1 dual vertices across boundary edges and hold that one edge.
struct Face {
    bool pendant = false;
    std::vector<int> edges;
    std::vector<int> verts;  // corners, counterclockwise (bounded faces only)
    Vec2 lat{0.0, 0.0};
    Vec2 pos{0.0, 0.0};
    int degree() const { return static_cast<int>(edges.size()); }
};

struct DimerGraph {
    RegionType region = RegionType::Aztec;
    int N = 1;      // size in fundamental domains
    int n = 1;      // fundamental domain period
    int size = 1;   // n * N
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Face> faces;  // bounded faces first, then pendants
    std::vector<Strand> strands;
    int bounded = 0;
    double omega0 = 0.25;

    int black_count() const;
    int white_count() const;
    // Bounded face at integer lattice point (X, Y), or -1.
    int face_at(int X, int Y) const;
    int edge_between(int u, int v) const;
    // Lattice translation of one fundamental domain that preserves labels.
    std::vector<std::pair<int, int>> periods() const;

    std::map<std::pair<int, int>, int> face_index;
    std::map<std::pair<int, int>, int> edge_index;
};

DimerGraph build_aztec(int N, int n = 1);
DimerGraph build_hexagon(int N, int n = 1);
DimerGraph build_graph(RegionType region, int N, const harnack::HarnackData& S);

}  // namespace dimer::lattice
