#include "dimer/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "dimer/cli/svg.hpp"
#include "dimer/harnack/admissibility.hpp"
#include "dimer/lattice/container.hpp"
#include "dimer/sampler/chain.hpp"

namespace dimer::cli {

using harnack::HarnackData;
using limitshape::LimitShape;

namespace {

const char* lattice_name(harnack::Lattice l) { return l == harnack::Lattice::Square ? "square" : "hexagonal"; }

const char* cover_name(harnack::Cover c) {
    switch (c) {
        case harnack::Cover::Ramified: return "ramified";
        case harnack::Cover::Unramified: return "unramified";
        default: return "none";
    }
}

HarnackData load(const json& doc) {
    HarnackData S = harnack::parse_harnack(doc);
    harnack::validate(S);
    return S;
}

LimitShape limit_shape(const HarnackData& S, const RunConfig& c) {
    riemann::SeriesOptions opt;
    opt.eps = c.series_eps;
    return LimitShape(std::make_shared<harnack::StandardDifferentials>(S, opt), c.oval_samples);
}

std::vector<Pt> domain_outline(harnack::Lattice l) {
    if (l == harnack::Lattice::Square) return {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    return {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
}

std::vector<Pt> pts(const std::vector<limitshape::UV>& c) {
    std::vector<Pt> out;
    out.reserve(c.size());
    for (auto p : c) out.push_back({p.u, p.v});
    return out;
}

Svg domain_svg(const LimitShape& ls, int width = 600) {
    auto b = ls.bounds();
    return Svg(b[0], b[1], b[2], b[3], width);
}

void draw_curves(Svg& svg, const std::vector<limitshape::ArcticCurve>& curves) {
    svg.group("arctic");
    for (const auto& c : curves) svg.polyline(pts(c.points), c.oval == 0 ? "#000000" : "#7f00ff", 1.5);
    svg.end_group();
}

lattice::RegionType region_of(const HarnackData& S) {
    return S.lattice == harnack::Lattice::Square ? lattice::RegionType::Aztec : lattice::RegionType::Hexagon;
}

json point(Pt p) { return json::array({p[0], p[1]}); }

// Lattice coordinates of the corners of the cell dual to a vertex.
std::vector<Pt> cell_corners(const lattice::DimerGraph& g, const lattice::Vertex& v) {
    const double x = v.lat[0], y = v.lat[1];
    std::vector<Pt> c;
    for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) c.push_back({std::floor(x) + dx, std::floor(y) + dy});
    if (g.region == lattice::RegionType::Hexagon) {
        // Triangles: drop the far corner of the unit rhombus.
        auto far = std::max_element(c.begin(), c.end(), [&](Pt a, Pt b) {
            return std::hypot(a[0] - x, a[1] - y) < std::hypot(b[0] - x, b[1] - y);
        });
        c.erase(far);
    }
    return c;
}

Pt to_domain(const lattice::DimerGraph& g, Pt p) {
    const double M = g.size;
    if (g.region == lattice::RegionType::Aztec) return {(p[0] - p[1]) / M, (p[0] + p[1]) / M};
    return {p[0] / M, p[1] / M};
}

}  // namespace

void check(const RunConfig& c) {
    if (!(c.tolerance >= 1e-14)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 1e-14");
    if (c.N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    if (c.sweeps < 1) throw Error(ErrorCode::InvalidArgument, "sweeps must be >= 1");
    if (c.chains < 1) throw Error(ErrorCode::InvalidArgument, "chains must be >= 1");
    if (c.resolution < 16) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 16");
    if (c.samples < 8) throw Error(ErrorCode::InvalidArgument, "samples must be >= 8");
    if (!(c.clip > 0)) throw Error(ErrorCode::InvalidArgument, "clip radius must be positive");
    if (!(c.series_eps >= 1e-14 && c.series_eps <= 1e-3))
        throw Error(ErrorCode::InvalidArgument, "series tolerance must lie in [1e-14, 1e-3]");
    if (c.oval_samples < 50) throw Error(ErrorCode::InvalidArgument, "oval samples must be >= 50");
}

RunConfig preview_config() {
    RunConfig c;
    c.series_eps = 1e-6;
    c.oval_samples = 200;
    c.samples = 200;
    return c;
}

int exit_code(ErrorCode c) { return c == ErrorCode::ClusteringViolation ? 2 : 1; }

json error_payload(const Error& e) { return {{"error", error_name(e.code())}, {"message", e.what()}}; }

std::string provenance(const json& doc) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << lattice::fnv1a(doc.dump());
    return s.str();
}

json cmd_validate(const json& doc) {
    HarnackData S = load(doc);
    json r = {{"ok", true},
              {"lattice", lattice_name(S.lattice)},
              {"n", S.n},
              {"genus", S.genus()},
              {"cover", cover_name(S.cover)},
              {"marked_points", S.points.size()},
              {"clustering", "OK"},
              {"provenance", provenance(doc)}};
    json warnings = json::array();
    if (S.lattice == harnack::Lattice::Hexagonal && S.cover == harnack::Cover::Ramified) {
        double f3 = std::abs(harnack::f3_at_branch(S));
        r["f3_at_branch"] = f3;
        if (f3 > 1e-10) warnings.push_back("not admissible; run admissify");
    }
    if (S.lattice == harnack::Lattice::Hexagonal && S.cover == harnack::Cover::Unramified) {
        auto u = harnack::check_unramified_admissibility(S);
        r["ell_zeros"] = u.zeros.size();
        if (!u.admissible) warnings.push_back("not admissible: ell needs 6 antipodally paired zeros");
    }
    r["warnings"] = warnings;
    return r;
}

json cmd_admissify(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    if (S.lattice == harnack::Lattice::Hexagonal && S.cover == harnack::Cover::Ramified) {
        auto res = harnack::optimize_ramified_admissibility(S, c.tolerance);
        return {{"harnack", harnack::to_json(res.data)},
                {"residual", res.residual},
                {"displacement", res.displacement},
                {"iterations", res.iterations},
                {"provenance", provenance(doc)}};
    }
    if (S.lattice == harnack::Lattice::Hexagonal && S.cover == harnack::Cover::Unramified) {
        auto u = harnack::check_unramified_admissibility(S);
        json pairs = json::array();
        for (auto [a, b] : u.pairs) pairs.push_back({point({a.real(), a.imag()}), point({b.real(), b.imag()})});
        return {{"harnack", harnack::to_json(S)},
                {"admissible", u.admissible},
                {"zeros", u.zeros},
                {"pairs", pairs},
                {"provenance", provenance(doc)}};
    }
    throw Error(ErrorCode::InvalidArgument, "admissify applies to hexagonal double covers");
}

Output cmd_arctic(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    LimitShape ls = limit_shape(S, c);
    auto curves = ls.arctic_curves(c.samples);
    json tang = json::array();
    std::vector<Pt> marks;
    for (double t : ls.differentials().pole_angles()) {
        auto p = ls.arctic_point(0, t);
        marks.push_back({p.u, p.v});
        tang.push_back(point(marks.back()));
    }
    Output out;
    out.data = limitshape::to_json(curves);
    out.data["tangencies"] = tang;
    out.data["provenance"] = provenance(doc);

    Svg svg = domain_svg(ls);
    svg.comment("harnack " + provenance(doc));
    svg.polyline(domain_outline(S.lattice), "#808080", 1.0, true);
    draw_curves(svg, curves);
    svg.group("tangencies");
    for (Pt p : marks) svg.dot(p, 3.0, "#d62728");
    svg.end_group();
    out.svg = svg.str();
    return out;
}

Output cmd_maps(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    LimitShape ls = limit_shape(S, c);
    const auto& d = ls.differentials();
    auto A = [&](cplx z) { auto a = d.amoeba(z); return Pt{a[0], a[1]}; };
    auto P = [&](cplx z) { auto a = d.polygon(z); return Pt{a[0], a[1]}; };

    // Amoeba of S^1: one open piece per gap between poles, cut where it
    // leaves the clip disk.
    std::vector<double> ang = d.pole_angles();
    std::sort(ang.begin(), ang.end());
    std::vector<std::pair<std::string, std::vector<Pt>>> pieces;
    std::vector<Pt> corners;
    for (std::size_t i = 0; i < ang.size(); ++i) {
        double t0 = ang[i], t1 = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2 * M_PI;
        const int m = std::max(16, static_cast<int>(c.samples * (t1 - t0) / (2 * M_PI)));
        std::vector<Pt> cur;
        for (int j = 1; j < m; ++j) {
            Pt a = A(std::polar(1.0, t0 + (t1 - t0) * j / m));
            if (std::hypot(a[0], a[1]) > c.clip) {
                if (cur.size() > 1) pieces.push_back({"outer", cur});
                cur.clear();
                continue;
            }
            cur.push_back(a);
        }
        if (cur.size() > 1) pieces.push_back({"outer", cur});
        Pt q = P(std::polar(1.0, 0.5 * (t0 + t1)));
        q = {std::round(q[0] * 1e9) / 1e9, std::round(q[1] * 1e9) / 1e9};
        if (corners.empty() || std::hypot(q[0] - corners.back()[0], q[1] - corners.back()[1]) > 1e-6)
            corners.push_back(q);
    }
    if (corners.size() > 1 && std::hypot(corners[0][0] - corners.back()[0], corners[0][1] - corners.back()[1]) < 1e-6)
        corners.pop_back();
    json gas = json::array();
    for (int o = 1; o <= d.genus(); ++o) {
        std::vector<Pt> ring;
        for (int j = 0; j <= c.samples; ++j) ring.push_back(A(ls.oval_point(o, 2 * M_PI * j / c.samples)));
        pieces.push_back({"oval:" + std::to_string(o), ring});
        Pt g = P(ls.oval_point(o, 0.0));
        gas.push_back(point({std::round(g[0] * 1e9) / 1e9, std::round(g[1] * 1e9) / 1e9}));
    }

    // Lattice points of the (convex) polygon.
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (Pt q : corners) {
        lo_x = std::min(lo_x, q[0]);
        hi_x = std::max(hi_x, q[0]);
        lo_y = std::min(lo_y, q[1]);
        hi_y = std::max(hi_y, q[1]);
    }
    double orient = 0.0;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        Pt a = corners[i], b = corners[(i + 1) % corners.size()];
        orient += a[0] * b[1] - a[1] * b[0];
    }
    std::vector<Pt> lattice_pts;
    for (int y = static_cast<int>(std::ceil(lo_y - 1e-9)); y <= hi_y + 1e-9; ++y)
        for (int x = static_cast<int>(std::ceil(lo_x - 1e-9)); x <= hi_x + 1e-9; ++x) {
            bool in = true;
            for (std::size_t i = 0; i < corners.size() && in; ++i) {
                Pt a = corners[i], b = corners[(i + 1) % corners.size()];
                double cr = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
                in = orient >= 0 ? cr >= -1e-9 : cr <= 1e-9;
            }
            if (in) lattice_pts.push_back({double(x), double(y)});
        }

    Output out;
    json curves = json::array(), tent = json::array(), jc = json::array(), jl = json::array();
    for (const auto& [src, p] : pieces) {
        json q = json::array();
        for (Pt x : p) q.push_back(point(x));
        curves.push_back({{"source", src}, {"points", q}});
    }
    for (std::size_t p = 0; p < d.poles().size(); ++p) {
        auto t = d.tentacle(static_cast<int>(p));
        tent.push_back({{"angle", d.pole_angles()[p]}, {"direction", point({t[0], t[1]})}});
    }
    for (Pt q : corners) jc.push_back(point(q));
    for (Pt q : lattice_pts) jl.push_back(point(q));
    out.data = {{"amoeba", {{"curves", curves}, {"tentacles", tent}, {"clip", c.clip}}},
                {"polygon", {{"vertices", jc}, {"lattice_points", jl}, {"gas_points", gas}}},
                {"provenance", provenance(doc)}};

    // Amoeba on the left, polygon scaled into a box of the same size on the right.
    const double R = c.clip;
    Svg svg(-R, 3.4 * R, -R, R, 900);
    svg.comment("harnack " + provenance(doc));
    svg.polyline({{-R, -R}, {R, -R}, {R, R}, {-R, R}}, "#c0c0c0", 0.5, true);
    svg.group("amoeba");
    for (const auto& [src, p] : pieces) svg.polyline(p, src == "outer" ? "#000000" : "#7f00ff", 1.2);
    svg.end_group();
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
    const double k = 1.6 * R / span;
    auto place = [&](Pt q) { return Pt{2.4 * R + k * (q[0] - 0.5 * (lo_x + hi_x)), k * (q[1] - 0.5 * (lo_y + hi_y))}; };
    std::vector<Pt> poly;
    for (Pt q : corners) poly.push_back(place(q));
    svg.group("polygon");
    svg.polygon(poly, "#f2f2f2", "#000000", 1.2);
    for (Pt q : lattice_pts) svg.dot(place(q), 3.0, "#000000");
    for (const auto& g : gas) svg.dot(place({g[0].get<double>(), g[1].get<double>()}), 5.0, "#7f00ff");
    svg.end_group();
    out.svg = svg.str();
    return out;
}

std::vector<std::array<std::array<double, 2>, 2>> level_set(const limitshape::LimitShapeField& F, double c) {
    std::vector<std::array<Pt, 2>> segs;
    const int R = F.resolution;
    for (int j = 0; j + 1 < R; ++j)
        for (int i = 0; i + 1 < R; ++i) {
            const int I[4] = {i, i + 1, i + 1, i}, J[4] = {j, j, j + 1, j + 1};
            double h[4];
            bool ok = true;
            for (int k = 0; k < 4; ++k) {
                h[k] = F.height[F.at(I[k], J[k])];
                ok = ok && !std::isnan(h[k]);
            }
            if (!ok) continue;
            std::vector<Pt> cross;
            for (int k = 0; k < 4; ++k) {
                double a = h[k] - c, b = h[(k + 1) % 4] - c;
                if ((a < 0) == (b < 0)) continue;
                double t = a / (a - b);
                auto p = F.node(I[k], J[k]), q = F.node(I[(k + 1) % 4], J[(k + 1) % 4]);
                cross.push_back({p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)});
            }
            for (std::size_t k = 0; k + 1 < cross.size(); k += 2) segs.push_back({cross[k], cross[k + 1]});
        }
    return segs;
}

Output cmd_height(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    LimitShape ls = limit_shape(S, c);
    auto F = ls.extended_height_grid(c.resolution);
    Output out;
    out.data = limitshape::to_json(F);
    out.data["provenance"] = provenance(doc);

    double lo = 1e300, hi = -1e300;
    for (double h : F.height)
        if (!std::isnan(h)) {
            lo = std::min(lo, h);
            hi = std::max(hi, h);
        }
    Svg svg = domain_svg(ls);
    svg.comment("harnack " + provenance(doc));
    svg.polyline(domain_outline(S.lattice), "#808080", 1.0, true);
    svg.group("levels");
    const int levels = 16;
    for (int k = 1; k < levels; ++k) svg.segments(level_set(F, lo + (hi - lo) * k / levels), "#1f77b4", 0.8);
    svg.end_group();
    draw_curves(svg, ls.arctic_curves(c.samples));
    out.svg = svg.str();
    return out;
}

WeightsOutput cmd_weights(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    auto wg = lattice::weights(lattice::build_graph(region_of(S), c.N, S), S);
    return {lattice::encode(lattice::to_container(wg)), lattice::sidecar(wg, doc, {{"tolerance", c.tolerance}})};
}

json cmd_sample(const json& doc, const RunConfig& c) {
    HarnackData S = load(doc);
    const auto g = lattice::build_graph(region_of(S), c.N, S);
    auto wg = lattice::weights(g, S);
    sampler::SampleOptions opt;
    opt.sweeps = c.sweeps;
    opt.seed = c.seed;
    opt.thin = c.sweeps;
    opt.burn_in = c.burn_in;
    opt.chains = c.chains;
    auto runs = sampler::sample_chains(wg, opt);
    json faces = json::array(), chains = json::array();
    for (int f = 0; f < g.bounded; ++f) faces.push_back(point({g.faces[f].lat[0], g.faces[f].lat[1]}));
    for (const auto& run : runs) {
        const auto& s = run.back();
        std::vector<double> h(s.height.h.begin(), s.height.h.begin() + g.bounded);
        chains.push_back({{"sweep", s.sweep}, {"matching", s.matching}, {"height", h}});
    }
    return {{"region", lattice::region_name(g.region)},
            {"N", g.N},
            {"n", g.n},
            {"edges", g.edges.size()},
            {"sweeps", c.sweeps},
            {"burn_in", c.burn_in < 0 ? sampler::default_burn_in(wg) : c.burn_in},
            {"seed", c.seed},
            {"faces", faces},
            {"chains", chains},
            {"provenance", provenance(doc)}};
}

std::string render_configuration(const lattice::DimerGraph& g, const lattice::Matching& m,
                                 const std::vector<limitshape::ArcticCurve>& curves, const std::string& tag) {
    // Tile classes by the lattice step w -> b; they encode the local slope.
    static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ffbf00"};
    std::map<std::pair<long, long>, int> cls;
    auto key = [&](const lattice::Edge& e) {
        const auto &w = g.vertices[e.w].lat, &b = g.vertices[e.b].lat;
        return std::pair<long, long>{std::lround(3 * (b[0] - w[0])), std::lround(3 * (b[1] - w[1]))};
    };
    for (const auto& e : g.edges) cls.emplace(key(e), 0);
    int k = 0;
    for (auto& [_, v] : cls) v = k++;

    Svg svg(-1, 1, -1, 1, 600);
    svg.comment(tag);
    svg.group("tiles");
    for (int e : m) {
        const auto& E = g.edges[e];
        std::vector<Pt> c = cell_corners(g, g.vertices[E.w]);
        for (Pt p : cell_corners(g, g.vertices[E.b]))
            if (std::find(c.begin(), c.end(), p) == c.end()) c.push_back(p);
        Pt mid{0, 0};
        for (Pt p : c) mid = {mid[0] + p[0] / c.size(), mid[1] + p[1] / c.size()};
        std::sort(c.begin(), c.end(), [&](Pt a, Pt b) {
            return std::atan2(a[1] - mid[1], a[0] - mid[0]) < std::atan2(b[1] - mid[1], b[0] - mid[0]);
        });
        for (Pt& p : c) p = to_domain(g, p);
        svg.polygon(c, palette[cls.at(key(E)) % 4], "#000000", 0.2);
    }
    svg.end_group();
    if (!curves.empty()) draw_curves(svg, curves);
    return svg.str();
}

std::string cmd_render(const json& doc, const RunConfig& c, const json& sample) {
    HarnackData S = load(doc);
    const auto g = lattice::build_graph(region_of(S), c.N, S);
    json smp = sample.is_null() ? cmd_sample(doc, c) : sample;
    if (smp.at("N").get<int>() != g.N || smp.at("edges").get<std::size_t>() != g.edges.size())
        throw Error(ErrorCode::InvalidArgument, "sample does not belong to this region");
    lattice::Matching m = smp.at("chains").at(0).at("matching").get<lattice::Matching>();
    if (!lattice::is_perfect(g, m)) throw Error(ErrorCode::NotPerfectMatching, "sample is not a perfect matching");
    std::vector<limitshape::ArcticCurve> curves;
    if (c.overlay) curves = limit_shape(S, c).arctic_curves(c.samples);
    return render_configuration(g, m, curves, "harnack " + provenance(doc) + " seed " + std::to_string(c.seed));
}

}  // namespace dimer::cli
