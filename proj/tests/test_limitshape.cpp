#include <map>
#include <random>

#include "doctest.h"
#include "dimer/harnack/admissibility.hpp"
#include "dimer/limitshape/limitshape.hpp"
#include "fixtures.hpp"

using namespace dimer;
using namespace dimer::harnack;
using namespace dimer::limitshape;

namespace {

std::shared_ptr<LimitShape> make(const HarnackData& S) {
    return std::make_shared<LimitShape>(std::make_shared<StandardDifferentials>(S));
}

std::shared_ptr<LimitShape> uniform() {
    static auto L = make(uniform_square(1));
    return L;
}

std::shared_ptr<LimitShape> genus1() {
    static auto L = make(fixtures::square_genus1());
    return L;
}

std::shared_ptr<LimitShape> n2() {
    static auto L = make(fixtures::square_n2());
    return L;
}

std::shared_ptr<LimitShape> hex_ramified() {
    static auto L = make(uniform_hexagon_ramified());
    return L;
}

std::shared_ptr<LimitShape> hex_unramified() {
    static auto L = make(symmetric_hexagon_unramified());
    return L;
}

double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }
double norm(Vec2 a) { return std::hypot(a[0], a[1]); }

cplx random_interior(const riemann::SchottkyGroup& g, std::mt19937& rng, double margin) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (;;) {
        cplx z(U(rng), U(rng));
        if (g.in_domain(z, margin)) return z;
    }
}

}  // namespace

TEST_SUITE("limitshape") {
    TEST_CASE("dzeta family and its residues") {
        auto L = uniform();
        cplx z(0.2, -0.3);
        CHECK(std::abs(L->f(0, 0, z) - L->differentials().f(z)[2]) < 1e-15);
        const auto& d = L->differentials();
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> U(-1.5, 1.5);
        for (int t = 0; t < 200; ++t) {
            double u = U(rng), v = U(rng);
            // pole order: alpha+ (0), beta+ (pi/2), alpha- (pi), beta- (3pi/2)
            CHECK(L->residue(u, v, 2) == doctest::Approx(1 + v));
            CHECK(L->residue(u, v, 0) == doctest::Approx(1 - v));
            CHECK(L->residue(u, v, 1) == doctest::Approx(u - 1));
            CHECK(L->residue(u, v, 3) == doctest::Approx(-u - 1));
            bool alternating = true;
            for (int p = 0; p < 4; ++p)
                if (L->residue(u, v, p) * L->residue(u, v, (p + 1) % 4) >= 0) alternating = false;
            CHECK(alternating == (std::abs(u) < 1 && std::abs(v) < 1));
        }
        CHECK(d.poles().size() == 4);
    }

    TEST_CASE("KO map") {
        auto L = uniform();
        auto uv = L->ko_map(0.0);
        CHECK(std::abs(uv.u) < 1e-14);
        CHECK(std::abs(uv.v) < 1e-14);
        // approaching alpha- sends v to -1
        double prev = 1.0;
        for (double e : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            auto q = L->ko_map(std::polar(1.0 - e, M_PI + 0.5 * e));
            CHECK(std::abs(q.v + 1) < prev);
            prev = std::abs(q.v + 1);
        }
        CHECK(prev < 1e-4);

        for (auto Lp : {uniform(), genus1(), n2()}) {
            std::mt19937 rng(11);
            int checked = 0;
            for (int t = 0; t < 50; ++t) {
                cplx P = random_interior(Lp->differentials().group(), rng, 0.02);
                auto q = Lp->ko_map(P);
                CHECK(std::abs(Lp->f(q.u, q.v, P)) < 1e-10 * (1 + std::abs(Lp->differentials().f(P)[0])));
                auto r = Lp->free_zero(q.u, q.v, std::nullopt);
                REQUIRE(r.has_value());
                CHECK(std::abs(*r - P) < 1e-6);
                ++checked;
            }
            CHECK(checked == 50);
        }
    }

    TEST_CASE("uniform arctic curve is the unit circle") {
        auto L = uniform();
        for (int k = 0; k < 200; ++k) {
            double t = 2 * M_PI * (k + 0.37) / 200;
            auto p = L->arctic_point(0, t);
            CHECK(std::abs(p.u - std::sin(t)) < 1e-9);
            CHECK(std::abs(p.v - std::cos(t)) < 1e-9);
        }
        auto top = L->arctic_point(0, 0.0);
        CHECK(std::abs(top.v - 1) < 1e-8);
        CHECK(std::abs(top.u) < 1e-8);
    }

    TEST_CASE("arctic curves touch the boundary at marked points") {
        auto Sr = uniform_hexagon_ramified();
        for (auto Lp : {uniform(), genus1(), n2(), hex_ramified(), hex_unramified()}) {
            const auto& d = Lp->differentials();
            for (int p = 0; p < static_cast<int>(d.poles().size()); ++p) {
                auto uv = Lp->arctic_point(0, d.pole_angles()[p]);
                CHECK(std::abs(Lp->residue(uv.u, uv.v, p)) < 1e-8);
                CHECK(Lp->contains(uv.u, uv.v, -1e-8));
            }
        }
        auto L = genus1();
        const auto& d = L->differentials();
        auto a = L->arctic_point(0, 0.3);
        auto b = L->arctic_point(0, 3.3);
        auto c = L->arctic_point(0, 1.8);
        auto e = L->arctic_point(0, 4.6);
        CHECK(std::abs(a.v - 1) < 1e-8);
        CHECK(std::abs(b.v + 1) < 1e-8);
        CHECK(std::abs(c.u - 1) < 1e-8);
        CHECK(std::abs(e.u + 1) < 1e-8);
        // the limit agrees with the formula just off the pole
        for (int p = 0; p < 4; ++p) {
            auto x = L->arctic_point(0, d.pole_angles()[p]);
            auto y = L->arctic_point(0, d.pole_angles()[p] + 1e-5);
            CHECK(std::hypot(x.u - y.u, x.v - y.v) < 1e-3);
        }
    }

    TEST_CASE("parallelity") {
        for (auto L : {genus1(), n2(), hex_unramified()}) {
            const auto& d = L->differentials();
            int count = 0;
            for (int o = 0; o <= d.genus(); ++o)
                for (int k = 0; k < 50; ++k) {
                    double t = 2 * M_PI * (k + 0.5) / 50;
                    bool near_pole = false;
                    for (double a : d.pole_angles())
                        if (o == 0 && std::abs(std::remainder(t - a, 2 * M_PI)) < 0.02) near_pole = true;
                    if (near_pole) continue;
                    const double h = 1e-5;
                    auto p = L->arctic_point(o, t + h), m = L->arctic_point(o, t - h);
                    Vec2 arctic{p.u - m.u, p.v - m.v};
                    auto ap = d.amoeba(L->oval_point(o, t + h)), am = d.amoeba(L->oval_point(o, t - h));
                    Vec2 amoeba{ap[0] - am[0], ap[1] - am[1]};
                    if (norm(arctic) < 1e-9) continue;  // cusp
                    double angle = std::asin(std::min(1.0, std::abs(cross(arctic, amoeba)) / (norm(arctic) * norm(amoeba))));
                    CHECK(angle < 1e-3);
                    ++count;
                }
            CHECK(count >= 40);
        }
    }

    TEST_CASE("oval zeros are tangential") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> U(-0.95, 0.95);
        for (auto L : {uniform(), genus1(), n2()}) {
            for (int t = 0; t < 6; ++t) {
                double u = U(rng), v = U(rng);
                auto zeros = L->oval_zeros(u, v);
                for (auto [o, s] : zeros) {
                    auto q = L->arctic_point(o, s);
                    auto F = L->differentials().f(L->oval_point(o, s));
                    cplx dz = cplx(0, 1) * std::polar(1.0, s);  // direction only
                    Vec2 dir{(F[0] * dz).real(), (F[1] * dz).real()};
                    double dist = std::abs(cross({u - q.u, v - q.v}, dir)) / norm(dir);
                    CHECK(dist < 1e-6);
                }
            }
        }
    }

    TEST_CASE("zero count") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> U(-0.98, 0.98);
        for (auto L : {uniform(), genus1(), n2()}) {
            const auto& S = L->differentials().data();
            for (int t = 0; t < 20; ++t) {
                double u = U(rng), v = U(rng);
                auto c = L->census(u, v, true);
                CHECK(c.expected == 2 * S.genus() + 4 * S.n - 2);
                CHECK(c.total() == c.expected);
                CHECK(c.interior <= 1);
            }
        }
        auto H = hex_ramified();
        for (int t = 0; t < 10; ++t) {
            double u = 0.8 * U(rng), v = 0.8 * U(rng);
            if (!H->contains(u, v, 0.05)) continue;
            auto c = H->census(u, v, true);
            CHECK(c.expected == 6 * 1 + 4 * 0 - 2);
            CHECK(c.total() == c.expected);
        }
    }

    TEST_CASE("region classification") {
        auto L = uniform();
        CHECK(L->classify(0.5, 0.0).kind == RegionKind::Liquid);
        CHECK(L->classify(0.9, 0.9).kind == RegionKind::Frozen);
        CHECK_FALSE(L->free_zero(0.99, 0.99).has_value());
        auto P = L->free_zero(0.0, 0.0);
        REQUIRE(P.has_value());
        CHECK(std::abs(*P) < 1e-12);
        CHECK(L->classify(1.0, 0.3).kind == RegionKind::Boundary);
        CHECK(L->classify(1.2, 0.3).kind == RegionKind::Outside);
        // liquid exactly inside the unit circle
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int t = 0; t < 60; ++t) {
            double u = U(rng), v = U(rng), r = std::hypot(u, v);
            if (std::abs(r - 1) < 1e-3) continue;
            CHECK((L->classify(u, v).kind == RegionKind::Liquid) == (r < 1));
        }

        // genus 1: a gas bubble appears around the image of the inner oval
        auto G = genus1();
        int gas = 0, frozen = 0, liquid = 0;
        for (int i = 0; i < 41; ++i)
            for (int j = 0; j < 41; ++j) {
                auto r = G->classify(-0.975 + 1.95 * i / 40, -0.975 + 1.95 * j / 40);
                if (r.kind == RegionKind::Gas) {
                    ++gas;
                    CHECK(r.id == 1);
                    CHECK(G->census(-0.975 + 1.95 * i / 40, -0.975 + 1.95 * j / 40, false).oval_zeros[0] == 4);
                }
                if (r.kind == RegionKind::Frozen) ++frozen;
                if (r.kind == RegionKind::Liquid) ++liquid;
            }
        CHECK(gas > 0);
        CHECK(frozen > 0);
        CHECK(liquid > 0);

        // quasi-frozen regions exist once a cluster holds two points
        auto N = n2();
        int quasi = 0;
        for (int i = 0; i < 41; ++i)
            for (int j = 0; j < 41; ++j)
                if (N->classify(-0.99 + 1.98 * i / 40, -0.99 + 1.98 * j / 40).kind == RegionKind::QuasiFrozen) ++quasi;
        CHECK(quasi > 0);
    }

    TEST_CASE("hexagon regions") {
        auto scan = [](const std::shared_ptr<LimitShape>& L, std::map<RegionKind, int>& seen) {
            auto b = L->bounds();
            for (int i = 0; i < 25; ++i)
                for (int j = 0; j < 25; ++j) {
                    double u = b[0] + (b[1] - b[0]) * (i + 0.5) / 25, v = b[2] + (b[3] - b[2]) * (j + 0.5) / 25;
                    auto r = L->classify(u, v);
                    ++seen[r.kind];
                    if (r.kind == RegionKind::Gas) CHECK(r.id == L->central_oval());
                    if (r.kind != RegionKind::Outside && L->contains(u, v, 0.02)) {
                        auto c = L->census(u, v, true);
                        CHECK(c.total() == c.expected);
                    }
                }
        };
        std::map<RegionKind, int> ram, unram;
        scan(hex_ramified(), ram);
        scan(hex_unramified(), unram);
        CHECK(ram[RegionKind::Liquid] > 0);
        CHECK(ram[RegionKind::Frozen] > 0);
        CHECK(ram[RegionKind::Gas] == 0);
        CHECK(unram[RegionKind::Liquid] > 0);
        CHECK(unram[RegionKind::Frozen] > 0);
        CHECK(unram[RegionKind::Gas] > 0);
        // the ramified count 6n + 4g - 2 at the center
        auto c = hex_ramified()->census(0.0, 0.0, true);
        CHECK(c.expected == 4);
        CHECK(c.total() == 4);
    }

    TEST_CASE("complex height gradients") {
        for (auto L : {uniform(), genus1()}) {
            const auto& d = L->differentials();
            std::vector<UV> pts;
            std::mt19937 rng(4);
            std::uniform_real_distribution<double> U(-0.9, 0.9);
            while (pts.size() < 6) {
                double u = U(rng), v = U(rng);
                const double h = 1e-3;
                bool ok = true;
                for (auto [a, b] : {std::pair{u - h, v}, {u + h, v}, {u, v - h}, {u, v + h}, {u, v}})
                    if (L->classify(a, b).kind != RegionKind::Liquid) ok = false;
                if (ok) pts.push_back({u, v});
            }
            for (auto [u, v] : pts) {
                const double h = 1e-3;
                auto H = [&](double a, double b) { return L->complex_height(a, b); };
                double hu = (H(u + h, v).h - H(u - h, v).h) / (2 * h);
                double hv = (H(u, v + h).h - H(u, v - h).h) / (2 * h);
                double gu = (H(u + h, v).g - H(u - h, v).g) / (2 * h);
                double gv = (H(u, v + h).g - H(u, v - h).g) / (2 * h);
                auto P = *L->free_zero(u, v);
                auto s = d.polygon(P);
                auto x = d.amoeba(P);
                CHECK(std::abs(hu - s[0]) < 1e-4);
                CHECK(std::abs(hv - s[1]) < 1e-4);
                // J grad g = (g_v, -g_u)
                CHECK(std::abs(gv - x[0]) < 1e-4);
                CHECK(std::abs(-gu - x[1]) < 1e-4);
            }
            // moving the base point along its arc shifts H by a constant
            double q1 = d.base_angle(), q2 = d.base_angle() + 0.05;
            std::optional<cplx> first;
            for (auto [u, v] : pts) {
                cplx diff = L->complex_height(u, v, q1).H() - L->complex_height(u, v, q2).H();
                if (!first) first = diff;
                CHECK(std::abs(diff - *first) < 1e-8);
            }
        }
    }

    TEST_CASE("extended height function") {
        auto L = uniform();
        const int res = 32;
        auto F = L->extended_height_grid(res);
        double hu = (F.u1 - F.u0) / (res - 1);
        // boundary gradients: flat along the bottom edge
        for (int i = 0; i + 1 < res; ++i) {
            double du = (F.height[F.at(i + 1, 0)] - F.height[F.at(i, 0)]) / hu;
            CHECK(std::abs(du) < 1e-3);
        }
        for (int j = 0; j + 1 < res; ++j) {
            double dv = (F.height[F.at(0, j + 1)] - F.height[F.at(0, j)]) / hu;
            CHECK(std::abs(dv) < 1e-3);
        }
        CHECK(std::abs(F.height[F.at(0, 0)]) < 1e-12);
        CHECK(F.height[F.at(res - 1, res - 1)] == doctest::Approx(2.0).epsilon(1e-9));
        for (std::size_t k = 0; k < F.kind.size(); ++k) {
            auto g = F.gradient[k];
            CHECK(g[0] >= -1e-6);
            CHECK(g[1] >= -1e-6);
            CHECK(g[0] <= 1 + 1e-6);
            CHECK(g[1] <= 1 + 1e-6);
        }
        // finite-difference gradients agree with the stored ones away from the curve
        for (int j = 1; j + 1 < res; ++j)
            for (int i = 1; i + 1 < res; ++i) {
                auto k = F.at(i, j);
                double fu = (F.height[F.at(i + 1, j)] - F.height[F.at(i - 1, j)]) / (2 * hu);
                double fv = (F.height[F.at(i, j + 1)] - F.height[F.at(i, j - 1)]) / (2 * hu);
                auto uv = F.node(i, j);
                double r = std::hypot(uv.u, uv.v);
                if (std::abs(r - 1) < 3 * hu) continue;
                CHECK(std::abs(fu - F.gradient[k][0]) < 0.05);
                CHECK(std::abs(fv - F.gradient[k][1]) < 0.05);
            }
        // C^1 across the arctic curve: the gradient jump closes like sqrt(eps)
        for (int k = 0; k < 24; ++k) {
            double t = 2 * M_PI * (k + 0.3) / 24;
            auto c = L->arctic_point(0, t);
            auto jump = [&](double eps) {
                auto in = L->classify(c.u * (1 - eps), c.v * (1 - eps));
                auto out = L->classify(c.u * (1 + eps), c.v * (1 + eps));
                REQUIRE(in.kind == RegionKind::Liquid);
                REQUIRE(out.kind == RegionKind::Frozen);
                auto gi = L->height_gradient(0, 0, in), go = L->height_gradient(0, 0, out);
                double hi = L->height(c.u * (1 - eps), c.v * (1 - eps), in);
                double ho = L->height(c.u * (1 + eps), c.v * (1 + eps), out);
                CHECK(std::abs(hi - ho) < 3 * eps);
                return std::hypot(gi[0] - go[0], gi[1] - go[1]);
            };
            double j1 = jump(1e-4), j2 = jump(1e-6);
            CHECK(j2 < 2.0 / res);
            CHECK(j2 / j1 == doctest::Approx(0.1).epsilon(0.2));
        }
        // no liquid outside the square on a padded grid
        for (int i = 0; i < 30; ++i)
            for (int j = 0; j < 30; ++j) {
                double u = -1.1 + 2.2 * i / 29, v = -1.1 + 2.2 * j / 29;
                auto r = L->classify(u, v);
                if (r.kind == RegionKind::Liquid) CHECK(L->contains(u, v));
            }
    }

    TEST_CASE("Burgers equation and divergence") {
        auto L = uniform();
        double r1 = L->burgers_residual(0.2, 0.3, 1e-4);
        CHECK(r1 < 1e-2);
        double a = L->burgers_residual(0.2, 0.3, 2e-3), b = L->burgers_residual(0.2, 0.3, 1e-3);
        CHECK(a / b > 1.7);
        CHECK(a / b < 2.3);
        CHECK(std::abs(L->divergence(0.2, 0.3, 1e-4)) < 1e-2);
        auto G = genus1();
        auto P = G->ko_map(cplx(0.5, 0.3));
        CHECK(G->burgers_residual(P.u, P.v, 1e-4) < 1e-2);
        CHECK(std::abs(G->divergence(P.u, P.v, 1e-4)) < 1e-2);
    }

    TEST_CASE("arctic curves export") {
        auto j = to_json(genus1()->arctic_curves(64));
        REQUIRE(j["curves"].size() == 2);
        CHECK(j["curves"][0]["source"] == "outer");
        CHECK(j["curves"][1]["source"] == "oval:1");
        auto pts = j["curves"][1]["points"];
        CHECK(pts.front() == pts.back());
    }
}
