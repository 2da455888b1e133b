#include "dimer/lattice/height.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace dimer::lattice {

int pin_face(const DimerGraph& g) {
    int best = -1;
    double bd = 1e300;
    for (std::size_t f = g.bounded; f < g.faces.size(); ++f) {
        const Vec2 p = g.faces[f].pos;
        double d = std::hypot(p[0] + 1.0, p[1] + 1.0);
        if (d < bd - 1e-12) {
            bd = d;
            best = static_cast<int>(f);
        }
    }
    return best;
}

bool is_perfect(const DimerGraph& g, const Matching& m) {
    std::vector<int> deg(g.vertices.size(), 0);
    for (int e : m) {
        if (e < 0 || e >= static_cast<int>(g.edges.size())) return false;
        ++deg[g.edges[e].w];
        ++deg[g.edges[e].b];
    }
    for (int d : deg)
        if (d != 1) return false;
    return true;
}

namespace {

HeightField integrate(const DimerGraph& g, const std::vector<double>& omega) {
    const int F = static_cast<int>(g.faces.size());
    std::vector<std::vector<int>> adj(F);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[g.edges[e].f1].push_back(static_cast<int>(e));
        adj[g.edges[e].f2].push_back(static_cast<int>(e));
    }
    HeightField H;
    H.h.assign(F, 0.0);
    std::vector<char> known(F, 0);
    int start = pin_face(g);
    if (start < 0) return H;
    known[start] = 1;
    std::deque<int> q{start};
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int e : adj[f]) {
            const Edge& ed = g.edges[e];
            int o = ed.f1 == f ? ed.f2 : ed.f1;
            if (known[o]) continue;
            H.h[o] = H.h[f] + (ed.f1 == f ? omega[e] : -omega[e]);
            known[o] = 1;
            q.push_back(o);
        }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        if (std::abs(H.h[ed.f2] - H.h[ed.f1] - omega[e]) > 1e-9)
            throw Error(ErrorCode::NotPerfectMatching, "height 1-form is not closed");
    }
    return H;
}

}  // namespace

HeightField height_from_matching(const DimerGraph& g, const Matching& m) {
    if (!is_perfect(g, m)) throw Error(ErrorCode::NotPerfectMatching, "edge set is not a perfect matching");
    std::vector<double> omega(g.edges.size(), -g.omega0);
    for (int e : m) omega[e] += 1.0;
    return integrate(g, omega);
}

Matching matching_from_height(const DimerGraph& g, const HeightField& H) {
    Matching m;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        double x = H.h[ed.f2] - H.h[ed.f1] + g.omega0;
        long r = std::lround(x);
        if (std::abs(x - r) > 1e-9 || (r != 0 && r != 1)) {
            std::ostringstream os;
            os << "height difference " << x - g.omega0 << " across edge " << e << " is not a matching increment";
            throw Error(ErrorCode::NotPerfectMatching, os.str());
        }
        if (r == 1) m.push_back(static_cast<int>(e));
    }
    if (!is_perfect(g, m)) throw Error(ErrorCode::NotPerfectMatching, "heights do not encode a perfect matching");
    return m;
}

// Around a boundary vertex the pendants are joined through the interior by
// crossing every edge at that vertex, which changes h by a fixed amount.
HeightField boundary_height(const DimerGraph& g) {
    const int F = static_cast<int>(g.faces.size());
    HeightField H;
    H.h.assign(F, std::nan(""));
    std::vector<std::vector<int>> inc(g.vertices.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        inc[g.edges[e].w].push_back(static_cast<int>(e));
        inc[g.edges[e].b].push_back(static_cast<int>(e));
    }
    // Walk around v from the pendant p to the next pendant; returns the
    // omega0 part of the crossings.
    auto step_around = [&](int v, int p, int& out) {
        double acc = 0.0;
        int f = p;
        int e = g.faces[p].edges[0];
        for (std::size_t guard = 0; guard <= inc[v].size() + 1; ++guard) {
            const Edge& ed = g.edges[e];
            int o = ed.f1 == f ? ed.f2 : ed.f1;
            acc += ed.f1 == f ? -g.omega0 : g.omega0;
            if (g.faces[o].pendant) {
                out = o;
                return acc;
            }
            // next edge of face o at vertex v
            int next = -1;
            for (int e2 : g.faces[o].edges)
                if (e2 != e && (g.edges[e2].w == v || g.edges[e2].b == v)) next = e2;
            f = o;
            e = next;
        }
        throw Error(ErrorCode::InvalidArgument, "boundary walk did not close");
    };
    int start = pin_face(g);
    H.h[start] = 0.0;
    std::deque<int> q{start};
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        const Edge& ed = g.edges[g.faces[p].edges[0]];
        for (int v : {ed.w, ed.b}) {
            int o = -1;
            double acc = step_around(v, p, o);
            // All crossings at v have the same orientation, and exactly one of
            // the crossed edges is matched.
            double unit = ed.f1 == p ? 1.0 : -1.0;
            double dh = acc + unit;
            if (std::isnan(H.h[o])) {
                H.h[o] = H.h[p] + dh;
                q.push_back(o);
            }
        }
    }
    return H;
}

// The pendant staircase rises by M/4 per unit of u (or v) along the bottom
// and left sides; subtracting that affine part and flipping the sign leaves
// heights that are flat there and have gradients in [0, n]^2.
std::vector<double> scaled_height(const DimerGraph& g, const HeightField& H) {
    if (g.region != RegionType::Aztec)
        throw Error(ErrorCode::NotImplemented, "continuum scaling is only defined for the Aztec diamond");
    const double M = g.size;
    std::vector<double> out(H.h.size());
    for (std::size_t f = 0; f < H.h.size(); ++f) {
        const Vec2 p = g.faces[f].pos;
        double L = 0.25 * M * (p[0] + p[1] + 2.0);
        out[f] = 2.0 * g.n / M * (L - H.h[f]);
    }
    return out;
}

double log_matching_weight(const std::vector<double>& log_abs_K, const Matching& m) {
    double s = 0.0;
    for (int e : m) s += log_abs_K[e];
    return s;
}

}  // namespace dimer::lattice
