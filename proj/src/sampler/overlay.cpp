#include "dimer/sampler/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dimer::sampler {

using lattice::DimerGraph;
using limitshape::UV;

namespace {

double segment_distance(UV p, UV a, UV b) {
    double dx = b.u - a.u, dy = b.v - a.v;
    double L2 = dx * dx + dy * dy;
    double t = L2 > 0 ? std::clamp(((p.u - a.u) * dx + (p.v - a.v) * dy) / L2, 0.0, 1.0) : 0.0;
    return std::hypot(p.u - a.u - t * dx, p.v - a.v - t * dy);
}

bool inside(UV p, const std::vector<UV>& c) {
    bool in = false;
    for (std::size_t i = 0, j = c.size() - 1; i < c.size(); j = i++) {
        if ((c[i].v > p.v) != (c[j].v > p.v) &&
            p.u < (c[j].u - c[i].u) * (p.v - c[i].v) / (c[j].v - c[i].v) + c[i].u)
            in = !in;
    }
    return in;
}

}  // namespace

std::vector<FaceZone> face_zones(const DimerGraph& g, const std::vector<UV>& curve, double margin) {
    if (curve.size() < 3) throw Error(ErrorCode::InvalidArgument, "arctic curve needs at least 3 points");
    std::vector<FaceZone> z(g.faces.size());
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        UV p{g.faces[f].pos[0], g.faces[f].pos[1]};
        double d = 1e300;
        for (std::size_t i = 0; i < curve.size(); ++i)
            d = std::min(d, segment_distance(p, curve[i], curve[(i + 1) % curve.size()]));
        z[f].distance = inside(p, curve) ? -d : d;
        z[f].outside = z[f].distance > margin;
    }
    return z;
}

std::vector<std::optional<Vec2>> frozen_gradients(const DimerGraph& g, const limitshape::LimitShape& ls,
                                                  const std::vector<FaceZone>& zones) {
    if (g.region != lattice::RegionType::Aztec)
        throw Error(ErrorCode::NotImplemented, "frozen prediction is only set up for the Aztec diamond");
    // Frozen gradients are constant on each component; cache them by arc.
    std::map<int, Vec2> cache;
    std::vector<std::optional<Vec2>> grad(g.faces.size());
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        if (!zones[f].outside) continue;
        double u = std::clamp(g.faces[f].pos[0], -1.0 + 1e-9, 1.0 - 1e-9);
        double v = std::clamp(g.faces[f].pos[1], -1.0 + 1e-9, 1.0 - 1e-9);
        auto r = ls.classify(u, v);
        if (r.kind != limitshape::RegionKind::Frozen) continue;
        auto it = cache.find(r.id);
        if (it == cache.end()) it = cache.emplace(r.id, ls.height_gradient(u, v, r)).first;
        grad[f] = it->second;
    }
    return grad;
}

bool predicted_matched(const DimerGraph& g, int e, Vec2 G) {
    const auto& E = g.edges[e];
    const double M = g.size;
    double du = g.faces[E.f2].pos[0] - g.faces[E.f1].pos[0];
    double dv = g.faces[E.f2].pos[1] - g.faces[E.f1].pos[1];
    // h = (M / 4)(u + v + 2) - (M / 2n) h-hat
    double dh = 0.25 * M * (du + dv) - 0.5 * M / g.n * (G[0] * du + G[1] * dv);
    return dh + g.omega0 > 0.5;
}

OverlayStats frozen_overlay(const DimerGraph& g, const std::vector<std::optional<Vec2>>& grad,
                            const lattice::Matching& m) {
    std::vector<char> in(g.edges.size(), 0);
    for (int e : m) in[e] = 1;
    OverlayStats st;
    for (int f = 0; f < g.bounded; ++f) {
        if (!grad[f]) continue;
        ++st.faces;
        bool ok = true;
        for (int e : g.faces[f].edges) ok = ok && predicted_matched(g, e, *grad[f]) == static_cast<bool>(in[e]);
        st.consistent += ok;
    }
    for (int e : m) {
        const auto& E = g.edges[e];
        const auto& G = grad[E.f1] ? grad[E.f1] : grad[E.f2];
        if (!G) continue;
        ++st.dominoes;
        st.aligned += predicted_matched(g, e, *G);
    }
    return st;
}

HeightComparison compare_height(const DimerGraph& g, const limitshape::LimitShape& ls, const HeightField& mean) {
    std::vector<double> s = lattice::scaled_height(g, mean);
    std::vector<double> d;
    for (int f = 0; f < g.bounded; ++f) {
        double u = std::clamp(g.faces[f].pos[0], -1.0, 1.0), v = std::clamp(g.faces[f].pos[1], -1.0, 1.0);
        d.push_back(s[f] - ls.height(u, v));
    }
    HeightComparison c;
    c.faces = static_cast<int>(d.size());
    if (d.empty()) return c;
    double lo = *std::min_element(d.begin(), d.end()), hi = *std::max_element(d.begin(), d.end());
    c.offset = 0.5 * (lo + hi);
    c.max_abs = 0.5 * (hi - lo);
    c.corner_pinned = std::max(std::abs(lo), std::abs(hi));
    return c;
}

}  // namespace dimer::sampler
