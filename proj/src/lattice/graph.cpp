#include "dimer/lattice/graph.hpp"

#include <cmath>

namespace dimer::lattice {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int pos_mod(int a, int b) { return ((a % b) + b) % b; }

double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }

struct Builder {
    DimerGraph g;
    std::map<std::pair<int, int>, int> strand_key;  // (family, line)

    int strand(Family f, int line, int sign, int index, Vec2 dir) {
        auto key = std::make_pair(static_cast<int>(f), line);
        auto it = strand_key.find(key);
        if (it != strand_key.end()) return it->second;
        g.strands.push_back({f, sign, index, line, dir});
        int id = static_cast<int>(g.strands.size()) - 1;
        strand_key[key] = id;
        return id;
    }

    void add_edge(int u, int v, int sa, int sb) {
        Edge e;
        e.w = g.vertices[u].black ? v : u;
        e.b = g.vertices[u].black ? u : v;
        const Vec2 w = g.vertices[e.w].lat, b = g.vertices[e.b].lat;
        const Vec2 right{b[1] - w[1], -(b[0] - w[0])};
        bool a_first = cross(g.strands[sa].dir, right) > 0.0;
        e.s1 = a_first ? sa : sb;
        e.s2 = a_first ? sb : sa;
        g.edge_index[{std::min(u, v), std::max(u, v)}] = static_cast<int>(g.edges.size());
        g.edges.push_back(e);
    }

    void add_face(const std::vector<int>& cycle, Vec2 lat, Vec2 pos, std::pair<int, int> key) {
        Face f;
        f.lat = lat;
        f.pos = pos;
        f.verts = cycle;
        const int id = static_cast<int>(g.faces.size());
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            int e = g.edge_between(cycle[k], cycle[(k + 1) % cycle.size()]);
            f.edges.push_back(e);
            Edge& ed = g.edges[e];
            const Vec2 w = g.vertices[ed.w].lat, b = g.vertices[ed.b].lat;
            const Vec2 m{0.5 * (w[0] + b[0]), 0.5 * (w[1] + b[1])};
            if (cross({b[0] - w[0], b[1] - w[1]}, {lat[0] - m[0], lat[1] - m[1]}) > 0.0)
                ed.f1 = id;
            else
                ed.f2 = id;
        }
        g.face_index[key] = id;
        g.faces.push_back(std::move(f));
    }

    template <class ToDomain>
    void add_pendants(ToDomain to_domain) {
        g.bounded = static_cast<int>(g.faces.size());
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            Edge& ed = g.edges[e];
            for (int side = 0; side < 2; ++side) {
                int& slot = side == 0 ? ed.f1 : ed.f2;
                if (slot >= 0) continue;
                const Vec2 w = g.vertices[ed.w].lat, b = g.vertices[ed.b].lat;
                const Vec2 d{b[0] - w[0], b[1] - w[1]};
                const double s = side == 0 ? 0.5 : -0.5;
                Face f;
                f.pendant = true;
                f.edges = {static_cast<int>(e)};
                f.lat = {0.5 * (w[0] + b[0]) - s * d[1], 0.5 * (w[1] + b[1]) + s * d[0]};
                f.pos = to_domain(f.lat);
                slot = static_cast<int>(g.faces.size());
                g.faces.push_back(std::move(f));
            }
        }
    }
};

}  // namespace

const char* region_name(RegionType r) { return r == RegionType::Aztec ? "aztec" : "hexagon"; }

int DimerGraph::black_count() const {
    int c = 0;
    for (const auto& v : vertices) c += v.black;
    return c;
}

int DimerGraph::white_count() const { return static_cast<int>(vertices.size()) - black_count(); }

int DimerGraph::face_at(int X, int Y) const {
    auto it = face_index.find({X, Y});
    return it == face_index.end() ? -1 : it->second;
}

int DimerGraph::edge_between(int u, int v) const {
    auto it = edge_index.find({std::min(u, v), std::max(u, v)});
    if (it == edge_index.end()) throw Error(ErrorCode::InvalidArgument, "vertices are not adjacent");
    return it->second;
}

std::vector<std::pair<int, int>> DimerGraph::periods() const {
    if (region == RegionType::Aztec) return {{n, n}, {n, -n}};
    return {{n, 0}, {0, n}};
}

// Cells (i, j) with centers (i + 1/2, j + 1/2) and |x| + |y| <= M.  The
// diagonal lines x + y = k + 1/2 carry the alpha tracks, x - y = k + 1/2 the
// beta tracks.  Domain coordinates u = (x - y) / M, v = (x + y) / M.
DimerGraph build_aztec(int N, int n) {
    if (N < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "aztec: N and n must be >= 1");
    Builder B;
    DimerGraph& g = B.g;
    g.region = RegionType::Aztec;
    g.N = N;
    g.n = n;
    const int M = n * N;
    g.size = M;
    g.omega0 = 0.25;
    auto to_domain = [M](Vec2 p) { return Vec2{(p[0] - p[1]) / M, (p[0] + p[1]) / M}; };

    std::map<std::pair<int, int>, int> cell;
    for (int j = -M; j < M; ++j)
        for (int i = -M; i < M; ++i) {
            if (std::abs(i + 0.5) + std::abs(j + 0.5) > M) continue;
            Vertex v;
            v.black = pos_mod(i + j + M, 2) == 0;
            v.lat = {i + 0.5, j + 0.5};
            v.pos = to_domain(v.lat);
            cell[{i, j}] = static_cast<int>(g.vertices.size());
            g.vertices.push_back(v);
        }

    auto alpha = [&](int k) {
        int m = k + M;
        int sign = pos_mod(m, 2) == 1 ? 1 : -1;
        return B.strand(Family::Alpha, k, sign, pos_mod(floor_div(m, 2), n),
                        sign > 0 ? Vec2{1.0, -1.0} : Vec2{-1.0, 1.0});
    };
    auto beta = [&](int k) {
        int m = k + M;
        int sign = pos_mod(m, 2) == 1 ? 1 : -1;
        return B.strand(Family::Beta, k, sign, pos_mod(floor_div(m, 2), n),
                        sign > 0 ? Vec2{1.0, 1.0} : Vec2{-1.0, -1.0});
    };

    for (const auto& [ij, id] : cell) {
        auto [i, j] = ij;
        auto r = cell.find({i + 1, j});
        if (r != cell.end()) B.add_edge(id, r->second, alpha(i + j + 1), beta(i - j));
        auto u = cell.find({i, j + 1});
        if (u != cell.end()) B.add_edge(id, u->second, alpha(i + j + 1), beta(i - j - 1));
    }

    for (int Y = -M + 1; Y < M; ++Y)
        for (int X = -M + 1; X < M; ++X) {
            if (std::abs(X) + std::abs(Y) > M - 1) continue;
            std::vector<int> cyc = {cell.at({X - 1, Y - 1}), cell.at({X, Y - 1}), cell.at({X, Y}),
                                    cell.at({X - 1, Y})};
            Vec2 lat{double(X), double(Y)};
            B.add_face(cyc, lat, to_domain(lat), {X, Y});
        }
    B.add_pendants(to_domain);
    return std::move(B.g);
}

// Triangles of the triangular lattice inside the hexagon |a|, |b|, |a - b| <= M
// in skew coordinates.  Up triangles {(a,b), (a+1,b), (a+1,b+1)} are black,
// down triangles {(a,b), (a,b+1), (a+1,b+1)} white.  The strip a in [k, k+1]
// carries a beta track, b in [k, k+1] an alpha track and a - b in [k, k+1] a
// gamma track.  Domain coordinates (u, v) = (a, b) / M.
DimerGraph build_hexagon(int N, int n) {
    if (N < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "hexagon: N and n must be >= 1");
    Builder B;
    DimerGraph& g = B.g;
    g.region = RegionType::Hexagon;
    g.N = N;
    g.n = n;
    const int M = n * N;
    g.size = M;
    g.omega0 = 1.0 / 3.0;
    auto to_domain = [M](Vec2 p) { return Vec2{p[0] / M, p[1] / M}; };
    auto inside = [M](int a, int b) { return std::abs(a) <= M && std::abs(b) <= M && std::abs(a - b) <= M; };

    std::map<std::pair<int, int>, int> up, dn;
    for (int b = -M; b <= M; ++b)
        for (int a = -M; a <= M; ++a) {
            if (inside(a, b) && inside(a + 1, b) && inside(a + 1, b + 1)) {
                Vertex v{true, {a + 2.0 / 3.0, b + 1.0 / 3.0}, {}};
                v.pos = to_domain(v.lat);
                up[{a, b}] = static_cast<int>(g.vertices.size());
                g.vertices.push_back(v);
            }
            if (inside(a, b) && inside(a, b + 1) && inside(a + 1, b + 1)) {
                Vertex v{false, {a + 1.0 / 3.0, b + 2.0 / 3.0}, {}};
                v.pos = to_domain(v.lat);
                dn[{a, b}] = static_cast<int>(g.vertices.size());
                g.vertices.push_back(v);
            }
        }

    auto strand = [&](Family f, int k, Vec2 dir) { return B.strand(f, k, 0, pos_mod(k + M, n), dir); };
    auto alpha = [&](int k) { return strand(Family::Alpha, k, {1.0, 0.0}); };
    auto beta = [&](int k) { return strand(Family::Beta, k, {0.0, 1.0}); };
    auto gamma = [&](int k) { return strand(Family::Gamma, k, {-1.0, -1.0}); };

    for (const auto& [ab, id] : up) {
        auto [a, b] = ab;
        if (auto it = dn.find({a, b - 1}); it != dn.end()) B.add_edge(id, it->second, beta(a), gamma(a - b));
        if (auto it = dn.find({a + 1, b}); it != dn.end()) B.add_edge(id, it->second, alpha(b), gamma(a - b));
        if (auto it = dn.find({a, b}); it != dn.end()) B.add_edge(id, it->second, beta(a), alpha(b));
    }

    for (int b = -M + 1; b < M; ++b)
        for (int a = -M + 1; a < M; ++a) {
            if (!(std::abs(a) <= M - 1 && std::abs(b) <= M - 1 && std::abs(a - b) <= M - 1)) continue;
            std::vector<int> cyc = {up.at({a, b}),         dn.at({a, b}),         up.at({a - 1, b}),
                                    dn.at({a - 1, b - 1}), up.at({a - 1, b - 1}), dn.at({a, b - 1})};
            Vec2 lat{double(a), double(b)};
            B.add_face(cyc, lat, to_domain(lat), {a, b});
        }
    B.add_pendants(to_domain);
    return std::move(B.g);
}

DimerGraph build_graph(RegionType region, int N, const harnack::HarnackData& S) {
    if (region == RegionType::Aztec && S.lattice != harnack::Lattice::Square)
        throw Error(ErrorCode::InvalidArgument, "aztec region needs square lattice data");
    if (region == RegionType::Hexagon && S.lattice != harnack::Lattice::Hexagonal)
        throw Error(ErrorCode::InvalidArgument, "hexagon region needs hexagonal lattice data");
    return region == RegionType::Aztec ? build_aztec(N, S.n) : build_hexagon(N, S.n);
}

}  // namespace dimer::lattice
