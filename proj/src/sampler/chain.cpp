#include "dimer/sampler/chain.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <deque>
#include <thread>

namespace dimer::sampler {

using lattice::DimerGraph;

Matching ChainState::matching() const {
    Matching m;
    for (std::size_t e = 0; e < matched.size(); ++e)
        if (matched[e]) m.push_back(static_cast<int>(e));
    return m;
}

FlipTable::FlipTable(const WeightedGraph& wg) {
    const DimerGraph& g = wg.graph;
    off_.push_back(0);
    nb_.resize(g.bounded);
    for (int f = 0; f < g.bounded; ++f) {
        std::vector<int> lo, up;
        for (int e : g.faces[f].edges) {
            (g.edges[e].f1 == f ? lo : up).push_back(e);
            int other = g.edges[e].f1 == f ? g.edges[e].f2 : g.edges[e].f1;
            if (other < g.bounded) nb_[f].push_back(other);
        }
        // Bipartite faces alternate, so both sides have half the edges.
        if (lo.size() != up.size()) throw Error(ErrorCode::InvalidArgument, "face edges do not alternate");
        lo_.insert(lo_.end(), lo.begin(), lo.end());
        up_.insert(up_.end(), up.begin(), up.end());
        off_.push_back(static_cast<int>(lo_.size()));
        x_.push_back(wg.activity(f));
    }
}

void FlipTable::raise(ChainState& s, int f) const {
    for (int e : lower(f)) s.matched[e] = 0;
    for (int e : upper(f)) s.matched[e] = 1;
    s.height.h[f] += 1.0;
}

void FlipTable::lower_face(ChainState& s, int f) const {
    for (int e : upper(f)) s.matched[e] = 0;
    for (int e : lower(f)) s.matched[e] = 1;
    s.height.h[f] -= 1.0;
}

std::vector<int> flippable_faces(const WeightedGraph& wg, const ChainState& s) {
    FlipTable t(wg);
    std::vector<int> out;
    for (int f = 0; f < t.faces(); ++f)
        if (t.can_raise(s, f) || t.can_lower(s, f)) out.push_back(f);
    return out;
}

namespace {

Matching any_perfect_matching(const DimerGraph& g) {
    using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    G bg(g.vertices.size());
    for (const auto& e : g.edges) boost::add_edge(e.w, e.b, bg);
    std::vector<boost::graph_traits<G>::vertex_descriptor> mate(g.vertices.size());
    boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
    Matching m;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (mate[g.edges[e].w] == static_cast<std::size_t>(g.edges[e].b)) m.push_back(static_cast<int>(e));
    if (2 * m.size() != g.vertices.size())
        throw Error(ErrorCode::NotPerfectMatching, "region has no perfect matching");
    return m;
}

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chain)};
    std::uint32_t w[2];
    seq.generate(w, w + 2);
    return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

}  // namespace

ChainState init_state(const WeightedGraph& wg, std::uint64_t seed) {
    const DimerGraph& g = wg.graph;
    ChainState s;
    s.rng.seed(seed);
    Matching m = any_perfect_matching(g);
    s.matched.assign(g.edges.size(), 0);
    for (int e : m) s.matched[e] = 1;
    s.height = lattice::height_from_matching(g, m);

    // On a simply connected region the only state without a downward flip is
    // the minimum of the height lattice.
    FlipTable t(wg);
    std::deque<int> q;
    std::vector<char> queued(t.faces(), 1);
    for (int f = 0; f < t.faces(); ++f) q.push_back(f);
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        queued[f] = 0;
        if (!t.can_lower(s, f)) continue;
        t.lower_face(s, f);
        for (int o : t.neighbours(f))
            if (!queued[o]) {
                queued[o] = 1;
                q.push_back(o);
            }
    }
    return s;
}

void mh_sweep(ChainState& s, const FlipTable& t) {
    const int F = t.faces();
    if (F == 0) {
        ++s.sweeps;
        return;
    }
    std::uniform_int_distribution<int> pick(0, 2 * F - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < F; ++k) {
        int r = pick(s.rng);
        int f = r >> 1;
        if (r & 1) {
            if (!t.can_raise(s, f)) continue;
            double a = t.acceptance(f, 1);
            if (a >= 1.0 || u(s.rng) < a) t.raise(s, f);
        } else {
            if (!t.can_lower(s, f)) continue;
            double a = t.acceptance(f, -1);
            if (a >= 1.0 || u(s.rng) < a) t.lower_face(s, f);
        }
    }
    ++s.sweeps;
}

void mh_sweep(ChainState& s, const WeightedGraph& wg) {
    mh_sweep(s, FlipTable(wg));
#ifndef NDEBUG
    if (s.sweeps % 100 == 0 && !lattice::is_perfect(wg.graph, s.matching()))
        throw Error(ErrorCode::NotPerfectMatching, "chain left the matching space");
#endif
}

long default_burn_in(const WeightedGraph& wg) { return 20L * wg.graph.N; }

namespace {

template <class Visit>
void run_chain(const WeightedGraph& wg, const FlipTable& t, std::uint64_t seed, long sweeps, long burn_in,
               Visit&& visit) {
    ChainState s = init_state(wg, seed);
    for (long k = 0; k < burn_in; ++k) mh_sweep(s, t);
    s.sweeps = 0;
    for (long k = 0; k < sweeps; ++k) {
        mh_sweep(s, t);
        visit(s);
    }
}

template <class Work>
void parallel_chains(int chains, Work&& work) {
    if (chains <= 1) {
        work(0);
        return;
    }
    std::vector<std::thread> pool;
    for (int c = 0; c < chains; ++c) pool.emplace_back([&work, c] { work(c); });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<std::vector<Sample>> sample_chains(const WeightedGraph& wg, const SampleOptions& opt) {
    if (opt.sweeps < 1) throw Error(ErrorCode::InvalidArgument, "sweeps must be >= 1");
    if (opt.thin < 1) throw Error(ErrorCode::InvalidArgument, "thin must be >= 1");
    const long burn = opt.burn_in < 0 ? default_burn_in(wg) : opt.burn_in;
    const int chains = std::max(1, opt.chains);
    FlipTable t(wg);
    std::vector<std::vector<Sample>> out(chains);
    parallel_chains(chains, [&](int c) {
        std::uint64_t seed = chains == 1 ? opt.seed : chain_seed(opt.seed, c);
        run_chain(wg, t, seed, opt.sweeps, burn, [&](const ChainState& s) {
            if (s.sweeps % opt.thin == 0) out[c].push_back({s.sweeps, s.matching(), s.height});
        });
    });
    return out;
}

std::vector<Sample> sample(const WeightedGraph& wg, long sweeps, std::uint64_t seed, long thin, long burn_in) {
    SampleOptions opt;
    opt.sweeps = sweeps;
    opt.seed = seed;
    opt.thin = thin;
    opt.burn_in = burn_in;
    return sample_chains(wg, opt).front();
}

HeightField mean_height(const WeightedGraph& wg, const SampleOptions& opt) {
    if (opt.sweeps < 1) throw Error(ErrorCode::InvalidArgument, "sweeps must be >= 1");
    const long burn = opt.burn_in < 0 ? default_burn_in(wg) : opt.burn_in;
    const int chains = std::max(1, opt.chains);
    FlipTable t(wg);
    std::vector<std::vector<double>> acc(chains, std::vector<double>(wg.graph.faces.size(), 0.0));
    parallel_chains(chains, [&](int c) {
        std::uint64_t seed = chains == 1 ? opt.seed : chain_seed(opt.seed, c);
        run_chain(wg, t, seed, opt.sweeps, burn, [&](const ChainState& s) {
            for (std::size_t f = 0; f < acc[c].size(); ++f) acc[c][f] += s.height.h[f];
        });
    });
    HeightField mean;
    mean.h.assign(wg.graph.faces.size(), 0.0);
    for (const auto& a : acc)
        for (std::size_t f = 0; f < a.size(); ++f) mean.h[f] += a[f] / (static_cast<double>(opt.sweeps) * chains);
    return mean;
}

}  // namespace dimer::sampler
