#pragma once

#include <vector>

#include "dimer/lattice/graph.hpp"

namespace dimer::lattice {

// Sorted edge indices.
using Matching = std::vector<int>;

// Heights on all faces (bounded faces and boundary pendants), in units where
// a matched edge contributes 1 - omega0 and an unmatched one -omega0.
struct HeightField {
    std::vector<double> h;
};

// Pendant closest to the domain corner (-1, -1); heights are pinned to 0 there.
int pin_face(const DimerGraph& g);

bool is_perfect(const DimerGraph& g, const Matching& m);
// Crossing edge e from f1 to f2 changes h by [e in D] - omega0.
HeightField height_from_matching(const DimerGraph& g, const Matching& m);
Matching matching_from_height(const DimerGraph& g, const HeightField& h);

// Heights on pendants are the same for every matching.
HeightField boundary_height(const DimerGraph& g);

// Aztec heights rescaled to the continuum normalization on [-1, 1]^2:
// 0 on the bottom and left sides, 2n at the top right corner.
std::vector<double> scaled_height(const DimerGraph& g, const HeightField& h);

// nu(D) = prod |K_e| over D, returned as a log.
double log_matching_weight(const std::vector<double>& log_abs_K, const Matching& m);

}  // namespace dimer::lattice
