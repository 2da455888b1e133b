#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dimer/lattice/height.hpp"
#include "dimer/lattice/weights.hpp"

namespace dimer::sampler {

using lattice::HeightField;
using lattice::Matching;
using lattice::WeightedGraph;

struct ChainState {
    HeightField height;
    std::vector<char> matched;  // per edge
    std::mt19937_64 rng;
    long sweeps = 0;

    Matching matching() const;
};

// Per-face flip data.  Raising h(f) by one swaps the matched edges with
// f1 == f (lower) for the ones with f2 == f (upper).
class FlipTable {
  public:
    explicit FlipTable(const WeightedGraph& wg);

    int faces() const { return static_cast<int>(x_.size()); }
    bool can_raise(const ChainState& s, int f) const { return all_matched(s, lower(f)); }
    bool can_lower(const ChainState& s, int f) const { return all_matched(s, upper(f)); }
    void raise(ChainState& s, int f) const;
    void lower_face(ChainState& s, int f) const;
    double activity(int f) const { return x_[f]; }
    // Metropolis acceptance min(1, X_f^dir) of a valid flip, dir = +1 or -1.
    double acceptance(int f, int dir) const {
        double r = dir > 0 ? x_[f] : 1.0 / x_[f];
        return r < 1.0 ? r : 1.0;
    }
    // Faces sharing an edge with f.
    const std::vector<int>& neighbours(int f) const { return nb_[f]; }

  private:
    struct Span {
        const int* b;
        const int* e;
        const int* begin() const { return b; }
        const int* end() const { return e; }
    };
    Span lower(int f) const { return {lo_.data() + off_[f], lo_.data() + off_[f + 1]}; }
    Span upper(int f) const { return {up_.data() + off_[f], up_.data() + off_[f + 1]}; }
    static bool all_matched(const ChainState& s, Span es) {
        for (int e : es)
            if (!s.matched[e]) return false;
        return true;
    }

    std::vector<int> off_, lo_, up_;
    std::vector<double> x_;
    std::vector<std::vector<int>> nb_;
};

// Faces where a +1 or -1 flip is allowed (local extrema of h).
std::vector<int> flippable_faces(const WeightedGraph& wg, const ChainState& s);

// Minimal height state: any perfect matching, then lowered until no face can
// go down.
ChainState init_state(const WeightedGraph& wg, std::uint64_t seed = 1);

// |faces| proposals; each picks a face and a direction uniformly and accepts
// with min(1, X_f^dh).
void mh_sweep(ChainState& s, const WeightedGraph& wg);
void mh_sweep(ChainState& s, const FlipTable& t);

struct Sample {
    long sweep = 0;
    Matching matching;
    HeightField height;
};

struct SampleOptions {
    long sweeps = 1000;
    std::uint64_t seed = 1;
    long thin = 1;
    long burn_in = -1;  // -1: 20 N
    int chains = 1;
};

long default_burn_in(const WeightedGraph& wg);

// Samples after burn-in every `thin` sweeps.  Chains run on their own
// threads with seeds derived from (seed, chain).
std::vector<Sample> sample(const WeightedGraph& wg, long sweeps, std::uint64_t seed, long thin, long burn_in = -1);
std::vector<std::vector<Sample>> sample_chains(const WeightedGraph& wg, const SampleOptions& opt);

// Mean of h over every sweep after burn-in, averaged over chains.
HeightField mean_height(const WeightedGraph& wg, const SampleOptions& opt);

}  // namespace dimer::sampler
