#include "dimer/harnack/differentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimer/harnack/special.hpp"
#include "dimer/riemann/paths.hpp"

namespace dimer::harnack {

using riemann::DifferentialSeries;
using riemann::PoleSums;

std::array<double, 3> marked_residues(const HarnackData& S, const Marked& m) {
    if (S.lattice == Lattice::Square) {
        double s = m.sign < 0 ? 1.0 : -1.0;
        if (m.family == Family::Alpha) return {s, 0.0, 1.0};
        return {0.0, s, -1.0};
    }
    if (S.cover == Cover::None) {
        if (m.family == Family::Alpha) return {1.0, 0.0, 0.0};
        if (m.family == Family::Beta) return {0.0, 1.0, 0.0};
        return {-1.0, -1.0, 0.0};
    }
    const auto& [a, b, c] = S.sides;
    double s = m.sign < 0 ? 1.0 : -1.0;
    if (m.family == Family::Alpha) return {1.0, 0.0, s * a};
    if (m.family == Family::Beta) return {0.0, 1.0, -s * b};
    return {-1.0, -1.0, s * c};
}

StandardDifferentials::StandardDifferentials(HarnackData S, riemann::SeriesOptions opt) : S_(std::move(S)) {
    group_ = std::make_shared<riemann::SchottkyGroup>(S_.circles);
    has3_ = !(S_.lattice == Lattice::Hexagonal && S_.cover == Cover::None);

    // Merge coincident angles; repeated train tracks accumulate residue.
    std::vector<std::pair<double, std::array<double, 3>>> acc;
    for (const auto& m : S_.points) {
        auto r = marked_residues(S_, m);
        auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& p) {
            return std::abs(std::remainder(p.first - m.angle, 2.0 * M_PI)) < 1e-14;
        });
        if (it == acc.end()) {
            acc.push_back({m.angle, r});
        } else {
            for (int k = 0; k < 3; ++k) it->second[k] += r[k];
        }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [t, r] : acc) {
        angles_.push_back(t);
        poles_.push_back(std::polar(1.0, t));
        for (int k = 0; k < 3; ++k) res_[k].push_back(r[k]);
    }
    sums_ = std::make_shared<PoleSums>(*group_, poles_, std::vector<unsigned char>{}, -1, opt);
    for (int k = 0; k < 3; ++k) {
        std::vector<cplx> r(res_[k].begin(), res_[k].end());
        series_[k] = DifferentialSeries(sums_, r);
    }

    int first_sign = S_.lattice == Lattice::Hexagonal && S_.cover == Cover::None ? 0 : -1;
    tq_ = wrap_angle(S_.angles(Family::Alpha, first_sign).front() + 1e-3);
    // Only the imaginary part is pinned at Q; the real part keeps the
    // base-free normalization, which is symmetric for symmetric data.
    prim_q_.assign(poles_.size(), 0.0);
    sums_->primitive(base_point(), prim_q_.data(), true);
    for (auto& c : prim_q_) c = cplx(0.0, c.imag());

    // Cluster arcs: neighbours on S^1 from different groups.
    std::vector<std::pair<double, int>> lab;
    auto order = cluster_order(S_);
    for (const auto& m : S_.points) {
        int g = static_cast<int>(std::find(order.begin(), order.end(), std::make_pair(m.family, m.sign)) - order.begin());
        lab.push_back({m.angle, g});
    }
    std::sort(lab.begin(), lab.end());
    const std::size_t L = lab.size();
    std::vector<Arc> raw;
    for (std::size_t i = 0; i < L; ++i) {
        const auto& a = lab[i];
        const auto& b = lab[(i + 1) % L];
        if (a.second == b.second) continue;
        double t1 = b.first + (i + 1 == L ? 2.0 * M_PI : 0.0);
        raw.push_back({a.first, t1, {0.0, 0.0}});
    }
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (auto& arc : raw) {
        auto z = zeta(std::polar(1.0, 0.5 * (arc.t0 + arc.t1)));
        arc.corner = {-z[1].imag() / M_PI, z[0].imag() / M_PI};
        lo[0] = std::min(lo[0], arc.corner[0]);
        lo[1] = std::min(lo[1], arc.corner[1]);
    }
    offset_ = {-lo[0], -lo[1]};
    for (auto& arc : raw) {
        arc.corner[0] += offset_[0];
        arc.corner[1] += offset_[1];
    }
    arcs_ = std::move(raw);
}

StandardDifferentials::Values StandardDifferentials::eval(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> s(3 * np);
    sums_->eval(z, s.data(), s.data() + np, s.data() + 2 * np);
    Values v{};
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < np; ++p) {
            v.f[k] += res_[k][p] * s[p];
            v.df[k] += res_[k][p] * s[np + p];
            v.d2f[k] += res_[k][p] * s[2 * np + p];
        }
    return v;
}

std::array<cplx, 3> StandardDifferentials::f(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> s(np);
    sums_->eval(z, s.data(), nullptr, nullptr);
    std::array<cplx, 3> out{};
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < np; ++p) out[k] += res_[k][p] * s[p];
    return out;
}

std::array<cplx, 3> StandardDifferentials::zeta(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> F(np);
    sums_->primitive(z, F.data(), true);
    std::array<cplx, 3> out{};
    for (int k = 0; k < 3; ++k)
        for (int p = 0; p < np; ++p) out[k] += res_[k][p] * (F[p] - prim_q_[p]);
    return out;
}

Vec2 StandardDifferentials::amoeba(cplx z) const {
    auto zt = zeta(z);
    return {zt[0].real(), zt[1].real()};
}

Vec2 StandardDifferentials::polygon(cplx z) const {
    auto zt = zeta(z);
    return {-zt[1].imag() / M_PI + offset_[0], zt[0].imag() / M_PI + offset_[1]};
}

Vec2 StandardDifferentials::tentacle(int p) const { return {-res_[0][p], -res_[1][p]}; }

cplx StandardDifferentials::zeta2_dzeta1(cplx z) const {
    auto path = riemann::route(*group_, base_point(), z);
    const int np = sums_->size();
    std::vector<cplx> F(np), s(np);
    auto integrand = [&](cplx w) {
        sums_->primitive(w, F.data(), true);
        sums_->eval(w, s.data(), nullptr, nullptr);
        cplx z2 = 0.0, f1 = 0.0;
        for (int p = 0; p < np; ++p) {
            z2 += res_[1][p] * (F[p] - prim_q_[p]);
            f1 += res_[0][p] * s[p];
        }
        return z2 * f1;
    };
    return riemann::integrate_adaptive(integrand, path, 1e-11);
}

double StandardDifferentials::ronkin(cplx z) const {
    auto zt = zeta(z);
    double x2 = zt[1].real(), s2 = zt[0].imag() / M_PI + offset_[1];
    return -zeta2_dzeta1(z).imag() / M_PI + x2 * s2;
}

double StandardDifferentials::surface_tension(cplx z) const {
    auto zt = zeta(z);
    double x1 = zt[0].real(), s1 = -zt[1].imag() / M_PI + offset_[0];
    return zeta2_dzeta1(z).imag() / M_PI + x1 * s1;
}

double edge_surface_tension(cplx alpha, cplx beta, cplx z) {
    cplx q = (z - alpha) / (z - beta);
    // q is never a positive real for z in the closed disk, so arg in (0, 2 pi)
    // is continuous there.
    double a = std::arg(q);
    if (a < 0) a += 2.0 * M_PI;
    return (bloch_wigner(q) + std::log(std::abs(alpha - beta)) * a) / M_PI;
}

double surface_tension_genus0(const StandardDifferentials& d, cplx z) {
    if (d.genus() != 0) throw Error(ErrorCode::InvalidArgument, "closed-form surface tension needs genus 0");
    const auto& P = d.poles();
    const auto& r1 = d.residues(0);
    const auto& r2 = d.residues(1);
    double total = 0.0;
    for (std::size_t p = 0; p < P.size(); ++p) {
        if (r1[p] == 0.0) continue;
        for (std::size_t q = 0; q < P.size(); ++q)
            if (q != p && r2[q] != 0.0) total += r1[p] * r2[q] * edge_surface_tension(P[p], P[q], z);
    }
    return total;
}

}  // namespace dimer::harnack
