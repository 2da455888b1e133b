#include "dimer/riemann/paths.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace dimer::riemann {

namespace {

using GL15 = boost::math::quadrature::gauss<double, 15>;

cplx piece(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
    return GL15::integrate([&](double s) { return f(a + (b - a) * s); }, 0.0, 1.0) * (b - a);
}

cplx adapt(const std::function<cplx(cplx)>& f, cplx a, cplx b, cplx whole, double tol, int depth) {
    cplx m = 0.5 * (a + b);
    cplx left = piece(f, a, m), right = piece(f, m, b);
    cplx both = left + right;
    if (depth >= 40 || std::abs(both - whole) < tol) return both;
    return adapt(f, a, m, left, 0.5 * tol, depth + 1) + adapt(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

cplx integrate_adaptive(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts, double tol) {
    cplx total = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        cplx a = pts[s], b = pts[s + 1];
        if (a == b) continue;
        total += adapt(f, a, b, piece(f, a, b), tol, 0);
    }
    return total;
}

std::vector<cplx> route(const SchottkyGroup& group, cplx a, cplx b, double margin) {
    const auto& cs = group.circles();
    if (margin < 0.0) {
        double gap = 1.0;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            gap = std::min(gap, 1.0 - std::abs(cs[i].center) - cs[i].radius);
            for (std::size_t j = 0; j < i; ++j)
                gap = std::min(gap, std::abs(cs[i].center - cs[j].center) - cs[i].radius - cs[j].radius);
        }
        margin = 0.25 * gap;
    }
    // Holes crossed by the segment, ordered by where the segment meets them.
    struct Hit {
        double t0, t1;
        int k;
    };
    std::vector<Hit> hits;
    cplx d = b - a;
    double len2 = std::norm(d);
    for (std::size_t k = 0; k < cs.size() && len2 > 0.0; ++k) {
        double R = cs[k].radius + margin;
        cplx w = a - cs[k].center;
        // |w + t d|^2 = R^2
        double B = std::real(std::conj(w) * d), C = std::norm(w) - R * R;
        double disc = B * B - len2 * C;
        if (disc <= 0.0) continue;
        double sq = std::sqrt(disc);
        double t0 = (-B - sq) / len2, t1 = (-B + sq) / len2;
        if (t1 <= 0.0 || t0 >= 1.0) continue;
        hits.push_back({std::max(t0, 0.0), std::min(t1, 1.0), static_cast<int>(k)});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t0 < y.t0; });
    std::vector<cplx> out{a};
    for (const auto& h : hits) {
        const auto& c = cs[h.k];
        double R = c.radius + margin;
        cplx p0 = a + h.t0 * d, p1 = a + h.t1 * d;
        double th0 = std::arg(p0 - c.center), th1 = std::arg(p1 - c.center);
        double sweep = std::remainder(th1 - th0, 2.0 * M_PI);
        int steps = std::max(4, static_cast<int>(std::ceil(std::abs(sweep) * R / 0.02)));
        for (int s = 0; s <= steps; ++s) out.push_back(c.center + std::polar(R, th0 + sweep * s / steps));
    }
    out.push_back(b);
    return out;
}

}  // namespace dimer::riemann
