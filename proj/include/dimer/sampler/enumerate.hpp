#pragma once

#include <vector>

#include "dimer/lattice/height.hpp"

namespace dimer::sampler {

using lattice::DimerGraph;
using lattice::Matching;

// All perfect matchings, by recursive edge inclusion.  At most 24 vertices
// per color (TooLarge otherwise).
std::vector<Matching> enumerate_matchings(const DimerGraph& g);

}  // namespace dimer::sampler
