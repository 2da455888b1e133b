#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dimer/lattice/graph.hpp"
#include "dimer/riemann/surface.hpp"

namespace dimer::lattice {

using riemann::VecR;

// Angle of every strand's label on S^1 (hexagonal covers use the base curve).
std::vector<double> strand_angles(const DimerGraph& g, const harnack::HarnackData& S);

// Discrete Abel map on the vertices of the diamond graph: graph vertices and
// faces (pendants included).  Empty vectors in genus 0.
struct AbelMap {
    std::vector<VecR> vertex, face;
    std::vector<VecR> strand;  // A(label) per strand
};
AbelMap discrete_abel(const DimerGraph& g, const riemann::Surface& X, const std::vector<double>& angles);

struct WeightedGraph {
    DimerGraph graph;
    std::vector<cplx> K;  // per edge
    std::vector<double> log_abs_K;
    std::vector<double> face_weight;      // real, per face (1 on pendants)
    std::vector<double> log_face_weight;  // log |W_f|
    int genus = 0;
    std::vector<double> D;

    // (-1)^(deg/2 + 1) W_f > 0 for a bounded face.
    double activity(int f) const;
};

// Fock weights need genus >= 1, isoradial weights genus 0.  weights() picks.
WeightedGraph fock_weights(const DimerGraph& g, const harnack::HarnackData& S,
                           std::shared_ptr<const riemann::Surface> X = nullptr, unsigned seed = 1);
WeightedGraph isoradial_weights(const DimerGraph& g, const harnack::HarnackData& S);
WeightedGraph weights(const DimerGraph& g, const harnack::HarnackData& S);
// Arbitrary complex weights; face weights filled in, no sign check.
WeightedGraph with_edge_weights(const DimerGraph& g, std::vector<cplx> K);

// W_f = prod K over edges with f on their right / prod K over edges with f on
// their left.  Raising h(f) by one adds the numerator edges to the matching.
cplx face_weight(const DimerGraph& g, const std::vector<cplx>& K, int f);
// Second evaluation of a Fock face weight from theta[Delta] of Abel
// differences, no spinors.
double fock_face_weight_theta(const WeightedGraph& wg, const riemann::Surface& X, const AbelMap& eta, int f,
                              const std::vector<double>& angles);

// Sign of the circular-order product over the strands at the corners of f.
int clustering_sign(const DimerGraph& g, const std::vector<double>& angles, int f);
int expected_sign(int degree);
void check_kasteleyn(const WeightedGraph& wg);

// Kasteleyn signs for positive weights from a spanning tree, completed by
// peeling faces with a single unassigned edge.
std::vector<int> kasteleyn_signs(const DimerGraph& g);
// |det K| with K = sigma |nu|.  log variant for large graphs.
double partition_function(const WeightedGraph& wg);
double log_partition_function(const WeightedGraph& wg);
// |det| of the complex weight matrix itself (valid when it is Kasteleyn).
double complex_determinant(const WeightedGraph& wg);

}  // namespace dimer::lattice
