#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "doctest.h"
#include "dimer/lattice/weights.hpp"
#include "dimer/sampler/chain.hpp"
#include "dimer/sampler/enumerate.hpp"
#include "dimer/sampler/overlay.hpp"
#include "fixtures.hpp"

using namespace dimer;
using namespace dimer::sampler;
using lattice::build_aztec;
using lattice::build_hexagon;

namespace {

WeightedGraph uniform_aztec(int N) { return lattice::isoradial_weights(build_aztec(N), harnack::uniform_square(1)); }

// Normalized nu(D) over all matchings.
std::vector<double> boltzmann(const WeightedGraph& wg, const std::vector<Matching>& ms) {
    std::vector<double> p;
    double z = 0.0;
    for (const auto& m : ms) {
        p.push_back(std::exp(lattice::log_matching_weight(wg.log_abs_K, m)));
        z += p.back();
    }
    for (double& x : p) x /= z;
    return p;
}

ChainState state_of(const WeightedGraph& wg, const Matching& m) {
    ChainState s;
    s.matched.assign(wg.graph.edges.size(), 0);
    for (int e : m) s.matched[e] = 1;
    s.height = lattice::height_from_matching(wg.graph, m);
    return s;
}

// One-sweep-proposal transition matrix of the chain over all matchings,
// assembled from the flip rule: pick (face, direction) with probability
// 1 / 2F, then accept.
std::vector<std::vector<double>> transition_matrix(const WeightedGraph& wg, const std::vector<Matching>& ms) {
    FlipTable t(wg);
    std::map<Matching, int> index;
    for (std::size_t i = 0; i < ms.size(); ++i) index[ms[i]] = static_cast<int>(i);
    const double q = 1.0 / (2.0 * t.faces());
    std::vector<std::vector<double>> P(ms.size(), std::vector<double>(ms.size(), 0.0));
    for (std::size_t i = 0; i < ms.size(); ++i) {
        double stay = 1.0;
        for (int f = 0; f < t.faces(); ++f)
            for (int dir : {1, -1}) {
                ChainState s = state_of(wg, ms[i]);
                bool ok = dir > 0 ? t.can_raise(s, f) : t.can_lower(s, f);
                if (!ok) continue;
                dir > 0 ? t.raise(s, f) : t.lower_face(s, f);
                int j = index.at(s.matching());
                double a = q * t.acceptance(f, dir);
                P[i][j] += a;
                stay -= a;
            }
        P[i][i] += stay;
    }
    return P;
}

double stationarity_error(const std::vector<std::vector<double>>& P, const std::vector<double>& pi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < pi.size(); ++i) s += pi[i] * P[i][j];
        worst = std::max(worst, std::abs(s - pi[j]));
    }
    return worst;
}

bool same(const HeightField& a, const HeightField& b) {
    for (std::size_t f = 0; f < a.h.size(); ++f)
        if (std::abs(a.h[f] - b.h[f]) > 1e-9) return false;
    return a.h.size() == b.h.size();
}

bool pointwise_le(const HeightField& a, const HeightField& b) {
    for (std::size_t f = 0; f < a.h.size(); ++f)
        if (a.h[f] > b.h[f] + 1e-9) return false;
    return true;
}

}  // namespace

TEST_SUITE("sampler") {
    TEST_CASE("enumeration") {
        CHECK(enumerate_matchings(build_aztec(1)).size() == 2);
        CHECK(enumerate_matchings(build_aztec(2)).size() == 8);
        CHECK(enumerate_matchings(build_hexagon(1)).size() == 2);
        auto empty = enumerate_matchings(lattice::DimerGraph{});
        REQUIRE(empty.size() == 1);
        CHECK(empty[0].empty());
        for (const auto& g : {build_aztec(3), build_hexagon(2)}) {
            auto wg = lattice::with_edge_weights(g, std::vector<cplx>(g.edges.size(), 1.0));
            CHECK(static_cast<double>(enumerate_matchings(g).size()) ==
                  doctest::Approx(lattice::partition_function(wg)).epsilon(1e-10));
        }
        try {
            enumerate_matchings(build_aztec(5));
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TooLarge);
        }
    }

    TEST_CASE("minimal height start") {
        for (const WeightedGraph& wg :
             {uniform_aztec(1), uniform_aztec(2), uniform_aztec(3),
              lattice::isoradial_weights(build_hexagon(2), harnack::uniform_hexagon_ramified())}) {
            ChainState s = init_state(wg);
            CHECK(lattice::is_perfect(wg.graph, s.matching()));
            CHECK(same(s.height, lattice::height_from_matching(wg.graph, s.matching())));
            int below = 0;
            for (const auto& m : enumerate_matchings(wg.graph)) {
                HeightField h = lattice::height_from_matching(wg.graph, m);
                CHECK(pointwise_le(s.height, h));
                below += same(h, s.height);
            }
            CHECK(below == 1);
            CHECK(init_state(wg, 99).matching() == s.matching());
        }
        // Empty box: no face of the hexagon can be lowered.
        auto hex = lattice::isoradial_weights(build_hexagon(3), harnack::uniform_hexagon_ramified());
        ChainState s = init_state(hex);
        FlipTable t(hex);
        for (int f = 0; f < t.faces(); ++f) CHECK_FALSE(t.can_lower(s, f));
    }

    TEST_CASE("uniform weights accept every valid flip") {
        WeightedGraph wg = uniform_aztec(4);
        FlipTable t(wg);
        for (int f = 0; f < t.faces(); ++f) {
            CHECK(t.acceptance(f, 1) == 1.0);
            CHECK(t.acceptance(f, -1) == 1.0);
        }
        // With X = 1 the chain is the uniform flip walk.
        auto ms = enumerate_matchings(build_aztec(2));
        auto P = transition_matrix(uniform_aztec(2), ms);
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = 0; j < ms.size(); ++j)
                if (i != j && P[i][j] > 0) CHECK(P[i][j] == doctest::Approx(1.0 / 10.0));
    }

    TEST_CASE("exact detailed balance") {
        std::vector<WeightedGraph> cases = {
            lattice::isoradial_weights(build_aztec(1), fixtures::random_square_genus0(1, 3)),
            lattice::isoradial_weights(build_aztec(1, 2), fixtures::random_square_genus0(2, 4)),
            lattice::isoradial_weights(build_hexagon(1), harnack::uniform_hexagon_ramified()),
            lattice::fock_weights(build_hexagon(1), fixtures::hexagon_genus1()),
            lattice::fock_weights(build_aztec(2), fixtures::square_genus1()),
        };
        for (const auto& wg : cases) {
            auto ms = enumerate_matchings(wg.graph);
            auto pi = boltzmann(wg, ms);
            auto P = transition_matrix(wg, ms);
            CHECK(stationarity_error(P, pi) < 1e-12);
            for (std::size_t i = 0; i < ms.size(); ++i)
                for (std::size_t j = 0; j < ms.size(); ++j)
                    CHECK(std::abs(pi[i] * P[i][j] - pi[j] * P[j][i]) < 1e-14);
        }
    }

    TEST_CASE("two-state chain on A_1") {
        // Scale one raising edge so that X = 4 at the single face.
        DimerGraph g = build_aztec(1);
        WeightedGraph base = uniform_aztec(1);
        std::vector<cplx> K = base.K;
        for (std::size_t e = 0; e < K.size(); ++e)
            if (g.edges[e].f2 == 0) {
                K[e] *= 4.0;
                break;
            }
        WeightedGraph wg = lattice::with_edge_weights(g, K);
        REQUIRE(wg.activity(0) == doctest::Approx(4.0));
        // Every 10th sweep: the lag-10 correlation of this chain is (3/8)^10.
        auto samples = sample(wg, 100000, 17, 10, 0);
        REQUIRE(samples.size() == 10000);
        ChainState lo = init_state(wg);
        int high = 0;
        for (const auto& s : samples) high += s.height.h[0] > lo.height.h[0];
        const double p = 0.8, n = static_cast<double>(samples.size());
        CHECK(std::abs(high / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
    }

    TEST_CASE("A_2 empirical law against Boltzmann weights") {
        WeightedGraph wg = lattice::isoradial_weights(build_aztec(2), fixtures::random_square_genus0(1, 29));
        auto ms = enumerate_matchings(wg.graph);
        REQUIRE(ms.size() == 8);
        auto pi = boltzmann(wg, ms);
        std::map<Matching, int> index;
        for (std::size_t i = 0; i < ms.size(); ++i) index[ms[i]] = static_cast<int>(i);
        // 10^6 proposals = 2 * 10^5 sweeps of 5 faces, recorded every 20 sweeps.
        auto samples = sample(wg, 200000, 5, 20, 100);
        std::vector<double> count(ms.size(), 0.0);
        for (const auto& s : samples) count[index.at(s.matching)] += 1.0;
        double chi2 = 0.0, n = static_cast<double>(samples.size());
        for (std::size_t i = 0; i < ms.size(); ++i) chi2 += std::pow(count[i] - n * pi[i], 2) / (n * pi[i]);
        double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(7.0), chi2));
        CHECK(p > 0.01);
    }

    TEST_CASE("ergodicity from the minimum") {
        WeightedGraph wg = uniform_aztec(2);
        HeightField top;
        for (const auto& m : enumerate_matchings(wg.graph)) {
            HeightField h = lattice::height_from_matching(wg.graph, m);
            if (top.h.empty() || pointwise_le(top, h)) top = h;
        }
        ChainState s = init_state(wg, 8);
        FlipTable t(wg);
        int sweeps = 0;
        while (!same(s.height, top) && sweeps < 1000) {
            mh_sweep(s, t);
            ++sweeps;
        }
        CHECK(same(s.height, top));
    }

    TEST_CASE("visited states and flippable faces") {
        WeightedGraph wg = lattice::fock_weights(build_aztec(4), fixtures::square_genus1());
        const auto& g = wg.graph;
        ChainState s = init_state(wg, 4);
        FlipTable t(wg);
        for (int k = 0; k < 300; ++k) {
            mh_sweep(s, t);
            if (k % 10) continue;
            CHECK(lattice::is_perfect(g, s.matching()));
            HeightField h = lattice::height_from_matching(g, s.matching());
            double drift = 0.0;
            for (std::size_t f = 0; f < h.h.size(); ++f) drift = std::max(drift, std::abs(h.h[f] - s.height.h[f]));
            CHECK(drift < 1e-9);
            // flippable iff a strict local extremum among neighbouring faces
            auto flip = flippable_faces(wg, s);
            std::vector<int> extrema;
            for (int f = 0; f < g.bounded; ++f) {
                bool lo = true, hi = true;
                for (int e : g.faces[f].edges) {
                    int o = g.edges[e].f1 == f ? g.edges[e].f2 : g.edges[e].f1;
                    lo = lo && s.height.h[o] > s.height.h[f];
                    hi = hi && s.height.h[o] < s.height.h[f];
                }
                if (lo || hi) extrema.push_back(f);
            }
            CHECK(flip == extrema);
        }
    }

    TEST_CASE("seeded reproducibility") {
        WeightedGraph wg = uniform_aztec(8);
        auto a = sample(wg, 20, 123, 5);
        auto b = sample(wg, 20, 123, 5);
        REQUIRE(a.size() == 4);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].sweep == b[i].sweep);
            CHECK(a[i].matching == b[i].matching);
        }
        ChainState x = init_state(wg, 1), y = init_state(wg, 2);
        FlipTable t(wg);
        mh_sweep(x, t);
        mh_sweep(y, t);
        CHECK(x.matching() != y.matching());

        SampleOptions opt;
        opt.sweeps = 10;
        opt.thin = 10;
        opt.chains = 3;
        auto c1 = sample_chains(wg, opt), c2 = sample_chains(wg, opt);
        REQUIRE(c1.size() == 3);
        for (int c = 0; c < 3; ++c) CHECK(c1[c].back().matching == c2[c].back().matching);
        CHECK(c1[0].back().matching != c1[1].back().matching);
        CHECK(default_burn_in(wg) == 160);
        CHECK_THROWS_AS(sample(wg, 0, 1, 1), Error);
    }

    TEST_CASE("uniform Aztec frozen corners and mean height") {
        auto S = harnack::uniform_square(1);
        limitshape::LimitShape ls(std::make_shared<harnack::StandardDifferentials>(S));
        auto curve = ls.arctic_curves().front().points;

        WeightedGraph wg = uniform_aztec(64);
        auto samples = sample(wg, 5000, 2024, 5000);
        REQUIRE(samples.size() == 1);
        auto zones = face_zones(wg.graph, curve, 0.1);
        auto grad = frozen_gradients(wg.graph, ls, zones);
        OverlayStats st = frozen_overlay(wg.graph, grad, samples.back().matching);
        CHECK(st.faces > 500);
        CHECK(st.domino_fraction() > 0.95);
        CHECK(st.face_fraction() > 0.95);

        WeightedGraph w48 = uniform_aztec(48);
        SampleOptions opt;
        opt.sweeps = 10000;
        opt.seed = 48;
        HeightComparison c = compare_height(w48.graph, ls, mean_height(w48, opt));
        CHECK(c.faces == 48 * 48 + 47 * 47);
        CHECK(c.corner_pinned < 0.15 * w48.graph.n);
    }

    TEST_CASE("asymmetric genus-0 weights follow the predicted height") {
        auto S = fixtures::random_square_genus0(2, 7);
        limitshape::LimitShape ls(std::make_shared<harnack::StandardDifferentials>(S));
        WeightedGraph wg = lattice::isoradial_weights(build_aztec(12, 2), S);
        SampleOptions opt;
        opt.sweeps = 20000;
        opt.burn_in = 20000;
        opt.seed = 12;
        HeightComparison c = compare_height(wg.graph, ls, mean_height(wg, opt));
        CHECK(c.corner_pinned < 0.15 * wg.graph.n);
    }
}
