#include "dimer/sampler/enumerate.hpp"

#include <algorithm>

namespace dimer::sampler {

namespace {

struct Search {
    const DimerGraph& g;
    std::vector<std::vector<int>> inc;  // edges at each white vertex
    std::vector<int> whites;
    std::vector<char> used;             // black vertices taken
    std::vector<int> chosen;
    std::vector<Matching> out;

    void run(std::size_t k) {
        if (k == whites.size()) {
            Matching m = chosen;
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
            return;
        }
        for (int e : inc[whites[k]]) {
            int b = g.edges[e].b;
            if (used[b]) continue;
            used[b] = 1;
            chosen.push_back(e);
            if (feasible(k + 1)) run(k + 1);
            chosen.pop_back();
            used[b] = 0;
        }
    }

    // Every remaining white vertex still has a free neighbour.
    bool feasible(std::size_t from) const {
        for (std::size_t j = from; j < whites.size(); ++j) {
            bool any = false;
            for (int e : inc[whites[j]])
                if (!used[g.edges[e].b]) {
                    any = true;
                    break;
                }
            if (!any) return false;
        }
        return true;
    }
};

}  // namespace

std::vector<Matching> enumerate_matchings(const DimerGraph& g) {
    if (g.black_count() > 24 || g.white_count() > 24)
        throw Error(ErrorCode::TooLarge, "enumeration is limited to 24 vertices per color");
    if (g.black_count() != g.white_count()) return {};
    Search s{g, std::vector<std::vector<int>>(g.vertices.size()), {}, std::vector<char>(g.vertices.size(), 0), {}, {}};
    for (std::size_t e = 0; e < g.edges.size(); ++e) s.inc[g.edges[e].w].push_back(static_cast<int>(e));
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (!g.vertices[v].black) s.whites.push_back(static_cast<int>(v));
    s.run(0);
    return s.out;
}

}  // namespace dimer::sampler
