#pragma once

#include <optional>
#include <vector>

#include "dimer/limitshape/limitshape.hpp"
#include "dimer/sampler/chain.hpp"

namespace dimer::sampler {

using lattice::Vec2;

// Where a face sits relative to the predicted arctic curve (the image of S^1).
struct FaceZone {
    bool outside = false;  // outside the curve by more than the margin
    double distance = 0.0; // signed distance to the curve, > 0 outside
};

std::vector<FaceZone> face_zones(const lattice::DimerGraph& g, const std::vector<limitshape::UV>& curve,
                                 double margin);

struct OverlayStats {
    int faces = 0, consistent = 0;
    int dominoes = 0, aligned = 0;
    double face_fraction() const { return faces ? static_cast<double>(consistent) / faces : 1.0; }
    double domino_fraction() const { return dominoes ? static_cast<double>(aligned) / dominoes : 1.0; }
};

// Limit-shape gradient at faces outside the curve that classify as frozen
// (Aztec only).
std::vector<std::optional<Vec2>> frozen_gradients(const lattice::DimerGraph& g, const limitshape::LimitShape& ls,
                                                  const std::vector<FaceZone>& zones);

// Edge occupation implied by a frozen gradient G of h-hat.
bool predicted_matched(const lattice::DimerGraph& g, int e, Vec2 G);

// A counted face is frozen-consistent when every edge around it is in the
// matching exactly when its gradient predicts so; a domino is aligned when an
// adjacent counted face predicts it.
OverlayStats frozen_overlay(const lattice::DimerGraph& g, const std::vector<std::optional<Vec2>>& grad,
                            const lattice::Matching& m);

// Scaled empirical height against the limit shape at bounded faces.  max_abs
// uses the best constant offset; corner_pinned keeps both pinned at (-1, -1).
struct HeightComparison {
    double max_abs = 0.0, offset = 0.0, corner_pinned = 0.0;
    int faces = 0;
};
HeightComparison compare_height(const lattice::DimerGraph& g, const limitshape::LimitShape& ls,
                                const HeightField& mean);

}  // namespace dimer::sampler
