#include "dimer/limitshape/limitshape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace dimer::limitshape {

using harnack::Cover;
using harnack::Family;
using harnack::Lattice;

const char* region_name(RegionKind k) {
    switch (k) {
        case RegionKind::Liquid: return "liquid";
        case RegionKind::Frozen: return "frozen";
        case RegionKind::QuasiFrozen: return "quasi-frozen";
        case RegionKind::Gas: return "gas";
        case RegionKind::Boundary: return "boundary";
        case RegionKind::Outside: return "outside";
    }
    return "?";
}

int ZeroCensus::total() const {
    int t = 0;
    for (int c : arc_zeros) t += c;
    for (int c : oval_zeros) t += c;
    return t + 2 * std::max(interior, 0);
}

UV LimitShapeField::node(int i, int j) const {
    double hu = (u1 - u0) / (resolution - 1), hv = (v1 - v0) / (resolution - 1);
    return {u0 + i * hu, v0 + j * hv};
}

LimitShape::LimitShape(std::shared_ptr<const harnack::StandardDifferentials> d, int samples)
    : d_(std::move(d)), samples_(samples) {
    if (!d_->has_third())
        throw Error(ErrorCode::InvalidArgument, "hexagonal limit shapes need a double cover");
    const auto& S = d_->data();
    const auto& ang = d_->pole_angles();
    const int np = static_cast<int>(ang.size());
    std::vector<Family> fam(np);
    for (int p = 0; p < np; ++p)
        for (const auto& m : S.points)
            if (std::abs(std::remainder(m.angle - ang[p], 2.0 * M_PI)) < 1e-12) {
                fam[p] = m.family;
                break;
            }
    for (int p = 0; p < np; ++p) {
        int q = (p + 1) % np;
        double t1 = ang[q] + (q == 0 ? 2.0 * M_PI : 0.0);
        arcs_.push_back({ang[p], t1, fam[p] == fam[q]});
    }
    fixed_ = S.on_cover() && S.cover == Cover::Ramified ? 2 : 0;
    if (S.on_cover() && S.cover == Cover::Unramified) central_ = S.central + 1;
    for (int i = 0; i < arc_count(); ++i) arc_samples_.push_back(sample_arc(i, samples_));
    for (int j = 0; j < d_->genus(); ++j) oval_samples_.push_back(sample_oval(j + 1, samples_));

    auto b = bounds();
    double u = b[0], v = b[2];
    if (S.lattice == Lattice::Hexagonal && !contains(u, v)) v = u + S.sides[2];
    Region r = classify(u * (1 - 1e-6), v * (1 - 1e-6));
    pin_ = height(u, v, r);
}

bool LimitShape::contains(double u, double v, double m) const {
    const auto& S = d_->data();
    if (S.lattice == Lattice::Square) return std::abs(u) <= 1 - m && std::abs(v) <= 1 - m;
    const auto& [a, b, c] = S.sides;
    return std::abs(v) <= a - m && std::abs(u) <= b - m && std::abs(u - v) <= c - m;
}

std::array<double, 4> LimitShape::bounds() const {
    const auto& S = d_->data();
    if (S.lattice == Lattice::Square) return {-1.0, 1.0, -1.0, 1.0};
    return {-S.sides[1], S.sides[1], -S.sides[0], S.sides[0]};
}

cplx LimitShape::f(double u, double v, cplx z) const {
    auto F = d_->f(z);
    return -u * F[1] + v * F[0] + F[2];
}

cplx LimitShape::zeta(double u, double v, cplx z) const {
    auto Z = d_->zeta(z);
    return -u * Z[1] + v * Z[0] + Z[2];
}

double LimitShape::residue(double u, double v, int p) const {
    return -u * d_->residues(1)[p] + v * d_->residues(0)[p] + d_->residues(2)[p];
}

cplx LimitShape::oval_point(int oval, double t) const {
    if (oval == 0) return std::polar(1.0, t);
    const auto& c = d_->group().circles()[oval - 1];
    return c.center + std::polar(c.radius, t);
}

double LimitShape::real_restriction(const harnack::StandardDifferentials::Values& ev, int oval, double t, double u,
                                    double v) const {
    cplx dz = oval == 0 ? cplx(0, 1) * std::polar(1.0, t)
                        : cplx(0, 1) * std::polar(d_->group().circles()[oval - 1].radius, t);
    return ((-u * ev.f[1] + v * ev.f[0] + ev.f[2]) * dz).real();
}

void LimitShape::push_components(Samples& s, const harnack::StandardDifferentials::Values& ev, int oval,
                                 double t) const {
    double f3 = real_restriction(ev, oval, t, 0.0, 0.0);
    s.g[0].push_back(real_restriction(ev, oval, t, 0.0, 1.0) - f3);
    s.g[1].push_back(real_restriction(ev, oval, t, 1.0, 0.0) - f3);
    s.g[2].push_back(f3);
}

LimitShape::Samples LimitShape::sample_arc(int i, int m) const {
    Samples s;
    const auto& a = arcs_[i];
    // Chebyshev nodes plus a geometric layer at each pole: near the domain
    // boundary a residue is small and a tangential zero sits that close.
    std::vector<double> xs;
    for (int j = 0; j < m; ++j) xs.push_back(0.5 * (1.0 - std::cos(M_PI * (j + 0.5) / m)));
    for (double e = -13.0; e < std::log10(xs.front()); e += 0.25) {
        xs.push_back(std::pow(10.0, e));
        xs.push_back(1.0 - std::pow(10.0, e));
    }
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
        double t = a.t0 + (a.t1 - a.t0) * x;
        auto ev = d_->eval(std::polar(1.0, t));
        s.t.push_back(t);
        push_components(s, ev, 0, t);
    }
    return s;
}

LimitShape::Samples LimitShape::sample_oval(int oval, int m) const {
    Samples s;
    for (int j = 0; j < m; ++j) {
        double t = 2.0 * M_PI * j / m;
        auto ev = d_->eval(oval_point(oval, t));
        s.t.push_back(t);
        push_components(s, ev, oval, t);
    }
    return s;
}

int LimitShape::sign_changes(const Samples& s, int oval, bool closed, double u, double v) const {
    // g[0], g[1], g[2] hold the restrictions of dzeta_1, -dzeta_2, dzeta_3.
    auto val = [&](std::size_t j) { return v * s.g[0][j] + u * s.g[1][j] + s.g[2][j]; };
    const std::size_t m = s.t.size();
    std::vector<double> g(m);
    for (std::size_t j = 0; j < m; ++j) g[j] = val(j);
    int n = 0;
    for (std::size_t j = 0; j + 1 < m + (closed ? 1 : 0); ++j)
        if ((g[j] > 0) != (g[(j + 1) % m] > 0)) ++n;
    // A pair of close zeros hides between samples as a dip of |g| that
    // keeps its sign; look for it at every local minimum.
    for (std::size_t j = closed ? 0 : 1; j < (closed ? m : m - 1); ++j) {
        std::size_t a = (j + m - 1) % m, b = (j + 1) % m;
        if ((g[a] > 0) != (g[j] > 0) || (g[b] > 0) != (g[j] > 0)) continue;
        if (std::abs(g[j]) > std::abs(g[a]) || std::abs(g[j]) > std::abs(g[b])) continue;
        double sg = g[j] > 0 ? 1.0 : -1.0;
        double ta = s.t[a], tb = s.t[b];
        if (tb < ta) tb += 2.0 * M_PI;
        if (ta > s.t[j]) ta -= 2.0 * M_PI;
        auto h = [&](double t) { return sg * real_restriction(d_->eval(oval_point(oval, t)), oval, t, u, v); };
        auto r = boost::math::tools::brent_find_minima(h, ta, tb, 40);
        if (r.second < 0) n += 2;
    }
    return n;
}

ZeroCensus LimitShape::census(double u, double v, bool count_interior) const {
    ZeroCensus c;
    int np = 0;
    for (int p = 0; p < static_cast<int>(d_->poles().size()); ++p)
        if (std::abs(residue(u, v, p)) > 1e-12) ++np;
    c.expected = 2 * d_->genus() - 2 + np;
    for (const auto& s : arc_samples_) c.arc_zeros.push_back(sign_changes(s, 0, false, u, v));
    for (int j = 0; j < d_->genus(); ++j) c.oval_zeros.push_back(sign_changes(oval_samples_[j], j + 1, true, u, v));
    if (count_interior) c.interior = interior_count(u, v);
    return c;
}

ZeroCensus LimitShape::dense_census(double u, double v, int factor) const {
    ZeroCensus c = census(u, v, false);
    for (int i = 0; i < arc_count(); ++i)
        c.arc_zeros[i] = sign_changes(sample_arc(i, samples_ * factor), 0, false, u, v);
    for (int j = 0; j < d_->genus(); ++j)
        c.oval_zeros[j] = sign_changes(sample_oval(j + 1, samples_ * factor), j + 1, true, u, v);
    return c;
}

std::vector<std::pair<int, double>> LimitShape::oval_zeros(double u, double v) const {
    std::vector<std::pair<int, double>> out;
    auto refine = [&](int oval, double a, double b) {
        auto g = [&](double t) { return real_restriction(d_->eval(oval_point(oval, t)), oval, t, u, v); };
        boost::uintmax_t it = 100;
        auto r = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(50), it);
        out.push_back({oval, 0.5 * (r.first + r.second)});
    };
    auto scan = [&](const Samples& s, int oval, bool closed) {
        auto val = [&](std::size_t j) { return v * s.g[0][j] + u * s.g[1][j] + s.g[2][j]; };
        std::size_t m = s.t.size();
        for (std::size_t j = 0; j + 1 < m + (closed ? 1 : 0); ++j) {
            std::size_t k = (j + 1) % m;
            if ((val(j) > 0) != (val(k) > 0)) {
                double tb = s.t[k] + (k == 0 ? 2.0 * M_PI : 0.0);
                refine(oval, s.t[j], tb);
            }
        }
    };
    for (const auto& s : arc_samples_) scan(s, 0, false);
    for (int j = 0; j < d_->genus(); ++j) scan(oval_samples_[j], j + 1, true);
    return out;
}

int LimitShape::interior_count(double u, double v) const {
    const auto& grp = d_->group();
    const auto& poles = d_->poles();
    auto winding = [&](auto&& path, double length) {
        // Track arg F along the contour, bisecting until each step turns by
        // less than 0.25 rad and is short next to the nearest pole.
        auto pole_gap = [&](cplx z) {
            double d = std::numeric_limits<double>::infinity();
            for (cplx p : poles) d = std::min(d, std::abs(z - p));
            return d;
        };
        double total = 0.0;
        const int n0 = 256;
        std::vector<std::pair<double, cplx>> stack;
        double ta = 0.0;
        cplx za = path(0.0);
        cplx fa = f(u, v, za);
        for (int i = 0; i < n0; ++i) {
            double b = double(i + 1) / n0;
            stack.clear();
            stack.push_back({b, f(u, v, path(b))});
            while (!stack.empty()) {
                auto [tb, vb] = stack.back();
                double da = std::arg(vb / fa);
                bool fine = (tb - ta) * length < 0.5 * pole_gap(za);
                if ((std::abs(da) < 0.25 && fine) || tb - ta < 1e-15) {
                    total += da;
                    ta = tb;
                    za = path(ta);
                    fa = vb;
                    stack.pop_back();
                } else {
                    double tm = 0.5 * (ta + tb);
                    stack.push_back({tm, f(u, v, path(tm))});
                }
            }
        }
        return total / (2.0 * M_PI);
    };
    for (double delta : {1e-3, 1e-5, 1e-7}) {
        double w = winding([&](double s) { return std::polar(1.0 - delta, 2.0 * M_PI * s); }, 2.0 * M_PI);
        for (const auto& c : grp.circles())
            w -= winding([&](double s) { return c.center + std::polar(c.radius + delta, 2.0 * M_PI * s); },
                         2.0 * M_PI * c.radius);
        int n = static_cast<int>(std::lround(w));
        auto cs = census(u, v, false);
        int ov = 0;
        for (int x : cs.arc_zeros) ov += x;
        for (int x : cs.oval_zeros) ov += x;
        if (ov + 2 * n == cs.expected) return n;
        if (delta == 1e-7) return n;
    }
    return 0;
}

Region LimitShape::region_from_census(const ZeroCensus& c, double u, double v) const {
    Region r;
    int hits = 0;
    for (int i = 0; i < arc_count(); ++i) {
        int base = arcs_[i].same ? 1 : 0;
        int extra = c.arc_zeros[i] - base;
        if (extra == 0) continue;
        if (extra != 2) hits += 10;
        r = {arcs_[i].same ? RegionKind::QuasiFrozen : RegionKind::Frozen, i, {}};
        ++hits;
    }
    for (int j = 0; j < d_->genus(); ++j) {
        int base = j + 1 == central_ ? 4 : 2;
        int extra = c.oval_zeros[j] - base;
        if (extra == 0) continue;
        if (extra != 2) hits += 10;
        r = {RegionKind::Gas, j + 1, {}};
        ++hits;
    }
    if (hits != 1) {
        std::ostringstream os;
        os << "oval zero pattern at (" << u << ", " << v << ") matches no region: arcs";
        for (int x : c.arc_zeros) os << ' ' << x;
        os << ", ovals";
        for (int x : c.oval_zeros) os << ' ' << x;
        throw Error(ErrorCode::ZeroCountMismatch, os.str());
    }
    return r;
}

std::optional<cplx> LimitShape::newton(double u, double v, cplx z, double margin) const {
    const auto& grp = d_->group();
    for (int it = 0; it < 60; ++it) {
        auto ev = d_->eval(z);
        cplx F = -u * ev.f[1] + v * ev.f[0] + ev.f[2];
        cplx dF = -u * ev.df[1] + v * ev.df[0] + ev.df[2];
        double scale = std::max(1.0, std::abs(ev.f[0]) + std::abs(ev.f[1]) + std::abs(ev.f[2]));
        if (std::abs(F) < 1e-11 * scale) {
            if (!grp.in_domain(z, std::max(margin, 1e-13))) return std::nullopt;
            if (fixed_ && std::abs(z) < 1e-6) return std::nullopt;
            return z;
        }
        if (dF == 0.0) return std::nullopt;
        cplx step = F / dF;
        if (std::abs(step) > 0.3) step *= 0.3 / std::abs(step);
        double lam = 1.0;
        while (!grp.in_domain(z - lam * step, std::min(margin, 1e-9)) && lam > 1e-6) lam *= 0.5;
        if (lam <= 1e-6) return std::nullopt;
        z -= lam * step;
    }
    return std::nullopt;
}

Region LimitShape::classify(double u, double v, std::optional<cplx> hint) const {
    if (!contains(u, v)) return {RegionKind::Outside, -1, {}};
    for (int p = 0; p < static_cast<int>(d_->poles().size()); ++p)
        if (std::abs(residue(u, v, p)) < 1e-12) return {RegionKind::Boundary, -1, {}};

    auto c = census(u, v, false);
    const int nonliquid = c.expected - fixed_;
    auto ovals = [](const ZeroCensus& x) {
        int t = 0;
        for (int a : x.arc_zeros) t += a;
        for (int a : x.oval_zeros) t += a;
        return t;
    };
    auto try_newton = [&](int grid, double margin) -> std::optional<cplx> {
        if (hint)
            if (auto z = newton(u, v, *hint, margin)) return z;
        const auto& grp = d_->group();
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                cplx z0(-0.9 + 1.8 * i / (grid - 1), -0.9 + 1.8 * j / (grid - 1));
                if (!grp.in_domain(z0, 0.02)) continue;
                if (auto z = newton(u, v, z0, margin)) return z;
            }
        return std::nullopt;
    };

    if (ovals(c) == nonliquid) return region_from_census(c, u, v);
    if (ovals(c) == nonliquid - 2)
        if (auto z = try_newton(9, 1e-6)) return {RegionKind::Liquid, -1, *z};

    // Disagreement: count interior zeros and recount on the ovals densely.
    int inner = interior_count(u, v);
    int liquid = inner - fixed_ / 2;
    if (liquid == 1) {
        // The zero may hug an oval (a point next to the arctic curve).
        if (auto z = try_newton(25, 0.0)) return {RegionKind::Liquid, -1, *z};
        throw Error(ErrorCode::NoConvergence, "free zero not found by Newton");
    }
    for (int factor : {8, 64}) {
        auto dc = dense_census(u, v, factor);
        if (ovals(dc) + 2 * inner == dc.expected && liquid == 0) return region_from_census(dc, u, v);
    }
    std::ostringstream os;
    os << "zero count at (" << u << ", " << v << ") disagrees with " << c.expected;
    throw Error(ErrorCode::ZeroCountMismatch, os.str());
}

std::optional<cplx> LimitShape::free_zero(double u, double v, std::optional<cplx> hint) const {
    auto r = classify(u, v, hint);
    if (r.kind == RegionKind::Liquid) return r.point;
    return std::nullopt;
}

UV LimitShape::pole_limit(int p) const {
    // Ratio of the leading Laurent coefficients of the Wronskians.
    cplx q = d_->poles()[p];
    std::array<double, 3> r{d_->residues(0)[p], d_->residues(1)[p], d_->residues(2)[p]};
    std::array<cplx, 3> a{};
    const double h = 1e-4;
    for (double s : {h, -h}) {
        cplx z = q * (1.0 + s);
        auto F = d_->f(z);
        for (int k = 0; k < 3; ++k) a[k] += 0.5 * (F[k] - r[k] / (z - q));
    }
    cplx den = r[0] * a[1] - a[0] * r[1];
    if (std::abs(den) < 1e-12) throw Error(ErrorCode::WronskianUnderflow, "vanishing Wronskian at a marked point");
    return {((r[0] * a[2] - a[0] * r[2]) / den).real(), ((r[1] * a[2] - a[1] * r[2]) / den).real()};
}

UV LimitShape::arctic_point(int oval, double t) const {
    if (oval < 0 || oval > d_->genus()) throw Error(ErrorCode::InvalidArgument, "no such oval");
    if (oval == 0) {
        const auto& ang = d_->pole_angles();
        for (int p = 0; p < static_cast<int>(ang.size()); ++p)
            if (std::abs(std::remainder(t - ang[p], 2.0 * M_PI)) < 1e-7) return pole_limit(p);
    }
    auto ev = d_->eval(oval_point(oval, t));
    auto W = [&](int i, int j) { return ev.f[i] * ev.df[j] - ev.df[i] * ev.f[j]; };
    cplx w12 = W(0, 1);
    if (std::abs(w12) < 1e-12) throw Error(ErrorCode::WronskianUnderflow, "W(f1, f2) below 1e-12 on an oval");
    return {(W(0, 2) / w12).real(), (W(1, 2) / w12).real()};
}

UV LimitShape::ko_map(cplx P) const {
    const auto& grp = d_->group();
    if (std::abs(std::abs(P) - 1.0) < 1e-9) return arctic_point(0, std::arg(P));
    for (int j = 0; j < grp.genus(); ++j) {
        const auto& c = grp.circles()[j];
        if (std::abs(std::abs(P - c.center) - c.radius) < 1e-9) return arctic_point(j + 1, std::arg(P - c.center));
    }
    auto F = d_->f(P);
    double det = (std::conj(F[0]) * F[1]).imag();
    if (std::abs(det) < 1e-13 * std::abs(F[0]) * std::abs(F[1]))
        throw Error(ErrorCode::DegenerateDenominator, "point lies on an oval");
    return {(std::conj(F[0]) * F[2]).imag() / det, (std::conj(F[1]) * F[2]).imag() / det};
}

cplx LimitShape::region_point(const Region& r) const {
    switch (r.kind) {
        case RegionKind::Liquid: return r.point;
        case RegionKind::Frozen:
        case RegionKind::QuasiFrozen: return std::polar(1.0, 0.5 * (arcs_[r.id].t0 + arcs_[r.id].t1));
        case RegionKind::Gas: return oval_point(r.id, 0.0);
        default: throw Error(ErrorCode::InvalidArgument, "no region point");
    }
}

ComplexHeight LimitShape::complex_height(double u, double v, std::optional<double> base_angle) const {
    auto P = free_zero(u, v);
    if (!P) throw Error(ErrorCode::NotLiquid, "point is not in the liquid region");
    cplx z = zeta(u, v, *P);
    auto off = d_->polygon_offset();
    ComplexHeight H;
    H.g = z.real();
    H.h = z.imag() / M_PI + off[0] * u + off[1] * v;
    if (base_angle) H.h -= zeta(u, v, std::polar(1.0, *base_angle)).imag() / M_PI;
    return H;
}

double LimitShape::height(double u, double v, const Region& r) const {
    cplx z = zeta(u, v, region_point(r));
    auto off = d_->polygon_offset();
    return z.imag() / M_PI + off[0] * u + off[1] * v - pin_;
}

Vec2 LimitShape::height_gradient(double, double, const Region& r) const {
    return d_->polygon(region_point(r));
}

double LimitShape::height(double u, double v) const {
    Region r = classify(u, v);
    if (r.kind == RegionKind::Outside) throw Error(ErrorCode::InvalidArgument, "point outside the domain");
    if (r.kind == RegionKind::Boundary) r = classify(u * (1 - 1e-9), v * (1 - 1e-9));
    return height(u, v, r);
}

double LimitShape::burgers_residual(double u, double v, double h) const {
    auto P = free_zero(u, v);
    if (!P) throw Error(ErrorCode::NotLiquid, "point is not in the liquid region");
    auto Pu = free_zero(u + h, v, P), Pv = free_zero(u, v + h, P);
    if (!Pu || !Pv) throw Error(ErrorCode::NotLiquid, "stencil leaves the liquid region");
    auto F = d_->f(*P);
    return std::abs((*Pu - *P) / h * F[0] + (*Pv - *P) / h * F[1]);
}

double LimitShape::divergence(double u, double v, double h) const {
    auto P = free_zero(u, v);
    if (!P) throw Error(ErrorCode::NotLiquid, "point is not in the liquid region");
    auto x = [&](double a, double b, int k) {
        auto z = free_zero(a, b, P);
        if (!z) throw Error(ErrorCode::NotLiquid, "stencil leaves the liquid region");
        return d_->amoeba(*z)[k];
    };
    return (x(u + h, v, 0) - x(u - h, v, 0)) / (2 * h) + (x(u, v + h, 1) - x(u, v - h, 1)) / (2 * h);
}

std::vector<ArcticCurve> LimitShape::arctic_curves(int samples) const {
    std::vector<ArcticCurve> out;
    ArcticCurve outer;
    for (int i = 0; i < arc_count(); ++i) {
        const auto& a = arcs_[i];
        int m = std::max(8, static_cast<int>(samples * (a.t1 - a.t0) / (2.0 * M_PI)));
        for (int j = 0; j < m; ++j) outer.points.push_back(arctic_point(0, a.t0 + (a.t1 - a.t0) * j / m));
    }
    outer.points.push_back(outer.points.front());
    out.push_back(std::move(outer));
    for (int o = 1; o <= d_->genus(); ++o) {
        ArcticCurve c;
        c.oval = o;
        for (int j = 0; j < samples; ++j) c.points.push_back(arctic_point(o, 2.0 * M_PI * j / samples));
        c.points.push_back(c.points.front());
        out.push_back(std::move(c));
    }
    return out;
}

LimitShapeField LimitShape::extended_height_grid(int res) const {
    if (res < 16) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 16");
    auto b = bounds();
    LimitShapeField F{b[0], b[1], b[2], b[3], res, {}, {}, {}, {}};
    const std::size_t N = static_cast<std::size_t>(res) * res;
    F.kind.assign(N, RegionKind::Outside);
    F.id.assign(N, -1);
    F.height.assign(N, std::numeric_limits<double>::quiet_NaN());
    F.gradient.assign(N, {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()});
    std::optional<cplx> hint;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
            auto [u, v] = F.node(i, j);
            // Snap round-off so the boundary lines classify as boundary.
            if (std::abs(std::abs(u) - std::abs(b[0])) < 1e-12) u = u < 0 ? b[0] : b[1];
            if (std::abs(std::abs(v) - std::abs(b[2])) < 1e-12) v = v < 0 ? b[2] : b[3];
            if (!contains(u, v, -1e-12)) continue;
            Region r = classify(u, v, hint);
            Region e = r;
            if (r.kind == RegionKind::Boundary || r.kind == RegionKind::Outside)
                e = classify(u * (1 - 1e-9), v * (1 - 1e-9), hint);
            if (e.kind == RegionKind::Liquid) hint = e.point;
            std::size_t k = F.at(i, j);
            F.kind[k] = r.kind == RegionKind::Outside ? RegionKind::Boundary : r.kind;
            F.id[k] = e.id;
            F.height[k] = height(u, v, e);
            F.gradient[k] = height_gradient(u, v, e);
        }
    return F;
}

nlohmann::json to_json(const std::vector<ArcticCurve>& curves) {
    nlohmann::json out;
    out["curves"] = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : c.points) pts.push_back({p.u, p.v});
        out["curves"].push_back({{"source", c.oval == 0 ? std::string("outer") : "oval:" + std::to_string(c.oval)},
                                 {"points", pts}});
    }
    return out;
}

nlohmann::json to_json(const LimitShapeField& F) {
    nlohmann::json kinds = nlohmann::json::array(), ids = nlohmann::json::array(), h = nlohmann::json::array();
    for (std::size_t k = 0; k < F.kind.size(); ++k) {
        kinds.push_back(region_name(F.kind[k]));
        ids.push_back(F.id[k]);
        if (std::isnan(F.height[k]))
            h.push_back(nullptr);
        else
            h.push_back(F.height[k]);
    }
    return {{"domain", {F.u0, F.u1, F.v0, F.v1}}, {"resolution", F.resolution}, {"region", kinds},
            {"region_id", ids}, {"height", h}};
}

}  // namespace dimer::limitshape
