#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "doctest.h"
#include "dimer/lattice/container.hpp"
#include "dimer/lattice/height.hpp"
#include "dimer/lattice/weights.hpp"
#include "dimer/sampler/enumerate.hpp"
#include "fixtures.hpp"

using namespace dimer;
using namespace dimer::lattice;
using dimer::sampler::enumerate_matchings;

namespace {

double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }

std::shared_ptr<riemann::Surface> surface_for(const harnack::HarnackData& S) {
    int s = S.lattice == harnack::Lattice::Square ? -1 : 0;
    return std::make_shared<riemann::Surface>(riemann::SchottkyGroup(S.circles),
                                              harnack::wrap_angle(S.angles(Family::Alpha, s).front() + 1e-3));
}

std::shared_ptr<riemann::Surface> genus1_surface() {
    static auto X = surface_for(fixtures::square_genus1());
    return X;
}

WeightedGraph unit_weights(const DimerGraph& g) { return with_edge_weights(g, std::vector<cplx>(g.edges.size(), 1.0)); }

double brute_partition(const WeightedGraph& wg) {
    double z = 0.0;
    for (const auto& m : enumerate_matchings(wg.graph)) z += std::exp(log_matching_weight(wg.log_abs_K, m));
    return z;
}

void check_structure(const DimerGraph& g) {
    CHECK(g.black_count() == g.white_count());
    for (const Edge& e : g.edges) {
        CHECK(e.s1 != e.s2);
        CHECK(g.strands[e.s1].family != g.strands[e.s2].family);
        const Vec2 w = g.vertices[e.w].lat, b = g.vertices[e.b].lat;
        const Vec2 m{0.5 * (w[0] + b[0]), 0.5 * (w[1] + b[1])};
        for (int s : {e.s1, e.s2}) {
            const Vec2 d = g.strands[s].dir;
            // white on the left of every strand, black on the right
            CHECK(cross(d, {w[0] - m[0], w[1] - m[1]}) > 0.0);
            CHECK(cross(d, {b[0] - m[0], b[1] - m[1]}) < 0.0);
        }
        CHECK(e.f1 >= 0);
        CHECK(e.f2 >= 0);
    }
    for (int f = 0; f < g.bounded; ++f) CHECK(g.faces[f].degree() % 2 == 0);
    for (std::size_t f = g.bounded; f < g.faces.size(); ++f) CHECK(g.faces[f].degree() == 1);
}

}  // namespace

TEST_SUITE("lattice") {
    TEST_CASE("aztec diamond structure and matching counts") {
        for (int N = 1; N <= 4; ++N) {
            DimerGraph g = build_aztec(N);
            CHECK(g.vertices.size() == static_cast<std::size_t>(2 * N * (N + 1)));
            CHECK(g.bounded == N * N + (N - 1) * (N - 1));
            check_structure(g);
            for (int f = 0; f < g.bounded; ++f) CHECK(g.faces[f].degree() == 4);
            double lo = 1e9, hi = -1e9;
            for (const auto& v : g.vertices) {
                CHECK(std::abs(v.pos[0]) <= 1.0);
                CHECK(std::abs(v.pos[1]) <= 1.0);
                lo = std::min({lo, v.pos[0], v.pos[1]});
                hi = std::max({hi, v.pos[0], v.pos[1]});
            }
            CHECK(lo == doctest::Approx(-1.0));
            CHECK(hi == doctest::Approx(1.0));
        }
        CHECK(enumerate_matchings(build_aztec(1)).size() == 2);
        CHECK(enumerate_matchings(build_aztec(2)).size() == 8);
        CHECK(enumerate_matchings(build_aztec(3)).size() == 64);
        // A_1 is a 2x2 block of cells
        CHECK(build_aztec(1).vertices.size() == 4);
    }

    TEST_CASE("hexagon structure and matching counts") {
        for (int N = 1; N <= 3; ++N) {
            DimerGraph g = build_hexagon(N);
            CHECK(g.black_count() == 3 * N * N);
            CHECK(g.bounded == 3 * N * (N - 1) + 1);
            check_structure(g);
            for (int f = 0; f < g.bounded; ++f) CHECK(g.faces[f].degree() == 6);
            for (const auto& v : g.vertices) {
                CHECK(std::abs(v.pos[0]) <= 1.0);
                CHECK(std::abs(v.pos[1]) <= 1.0);
                CHECK(std::abs(v.pos[0] - v.pos[1]) <= 1.0);
            }
        }
        CHECK(enumerate_matchings(build_hexagon(1)).size() == 2);
        // boxed plane partitions in a 2x2x2 box
        CHECK(enumerate_matchings(build_hexagon(2)).size() == 20);
    }

    TEST_CASE("strand labels repeat with period n") {
        DimerGraph g = build_aztec(2, 3);
        CHECK(g.size == 6);
        std::set<std::tuple<int, int, int>> labels;
        for (const Strand& s : g.strands) {
            labels.insert({static_cast<int>(s.family), s.sign, s.index});
            CHECK(s.index >= 0);
            CHECK(s.index < 3);
        }
        CHECK(labels.size() == 12);
        for (const Strand& a : g.strands)
            for (const Strand& b : g.strands)
                if (a.family == b.family && b.line == a.line + 2 * 3) {
                    CHECK(a.sign == b.sign);
                    CHECK(a.index == b.index);
                }
        // parallel tracks of one family alternate in direction
        for (const Strand& a : g.strands)
            for (const Strand& b : g.strands)
                if (a.family == b.family && b.line == a.line + 1) CHECK(a.sign == -b.sign);
        DimerGraph h = build_hexagon(2, 2);
        for (const Strand& s : h.strands) CHECK(s.index == ((s.line % 2) + 2) % 2);
    }

    TEST_CASE("discrete Abel map") {
        auto S = fixtures::square_genus1();
        DimerGraph g = build_aztec(3);
        auto X = genus1_surface();
        auto ang = strand_angles(g, S);
        AbelMap eta = discrete_abel(g, *X, ang);
        for (const Edge& e : g.edges) {
            VecR d = eta.vertex[e.b] - eta.vertex[e.w] + eta.strand[e.s1] + eta.strand[e.s2];
            CHECK(d.cwiseAbs().maxCoeff() < 1e-10);
            VecR df = eta.face[e.f2] - eta.face[e.f1] - eta.strand[e.s1] + eta.strand[e.s2];
            CHECK(df.cwiseAbs().maxCoeff() < 1e-10);
        }
        // Around a face the label increments cancel.
        for (int f = 0; f < g.bounded; ++f) {
            const Face& F = g.faces[f];
            VecR acc = VecR::Zero(1);
            for (std::size_t k = 0; k < F.verts.size(); ++k) {
                const Edge& e = g.edges[F.edges[k]];
                VecR inc = -(eta.strand[e.s1] + eta.strand[e.s2]);
                acc += F.verts[k] == e.w ? inc : VecR(-inc);
            }
            CHECK(acc.cwiseAbs().maxCoeff() < 1e-12);
        }
        // One period along (1, 1) crosses alpha+ and alpha-.
        VecR shift = X->abel_circle(S.angles(Family::Alpha, 1)[0]) - X->abel_circle(S.angles(Family::Alpha, -1)[0]);
        int a = g.face_at(-1, -1), b = g.face_at(0, 0);
        REQUIRE(a >= 0);
        REQUIRE(b >= 0);
        VecR d = eta.face[b] - eta.face[a];
        CHECK(std::abs(d(0) - shift(0)) < 1e-10);
        double frac = d(0) - std::round(d(0));
        CHECK(std::abs(frac) > 1e-3);

        AbelMap e0 = discrete_abel(g, riemann::Surface(riemann::SchottkyGroup(), 0.0), ang);
        CHECK(e0.face[0].size() == 0);

        DimerGraph bad = g;
        const Edge& e5 = g.edges[5];
        for (std::size_t s = 0; s < g.strands.size(); ++s)
            if (g.strands[s].family == g.strands[e5.s1].family && ang[s] != ang[e5.s1]) {
                bad.edges[5].s1 = static_cast<int>(s);
                break;
            }
        REQUIRE(bad.edges[5].s1 != e5.s1);
        CHECK_THROWS_AS(discrete_abel(bad, *X, ang), Error);
        try {
            discrete_abel(bad, *X, ang);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InconsistentLabeling);
        }
    }

    TEST_CASE("isoradial weights") {
        DimerGraph g = build_aztec(3);
        WeightedGraph wg = isoradial_weights(g, harnack::uniform_square(1));
        for (const cplx& k : wg.K) CHECK(std::abs(std::abs(k) - std::sqrt(2.0)) < 1e-14);
        for (int f = 0; f < g.bounded; ++f) CHECK(std::abs(wg.face_weight[f] + 1.0) < 1e-12);

        // n = 1 genus 0: weights are periodic under the lattice translations
        auto S = fixtures::random_square_genus0(1, 7);
        WeightedGraph w1 = isoradial_weights(build_aztec(4), S);
        int pairs = 0;
        for (int f = 0; f < w1.graph.bounded; ++f)
            for (auto [dx, dy] : w1.graph.periods()) {
                const Vec2 p = w1.graph.faces[f].lat;
                int t = w1.graph.face_at(static_cast<int>(p[0]) + dx, static_cast<int>(p[1]) + dy);
                if (t < 0) continue;
                ++pairs;
                CHECK(std::abs(w1.face_weight[t] - w1.face_weight[f]) < 1e-12 * std::abs(w1.face_weight[f]));
            }
        CHECK(pairs > 10);

        // Face weight from the four corner strands, with E(a, b) = 2 sin((b - a) / 2).
        auto S2 = fixtures::random_square_genus0(2, 11);
        WeightedGraph w2 = isoradial_weights(build_aztec(3, 2), S2);
        auto ang = strand_angles(w2.graph, S2);
        for (int f = 0; f < w2.graph.bounded; ++f) {
            const Face& F = w2.graph.faces[f];
            std::vector<double> c;
            for (int k = 0; k < 4; ++k) {
                const Edge& a = w2.graph.edges[F.edges[(k + 3) % 4]];
                const Edge& b = w2.graph.edges[F.edges[k]];
                c.push_back(ang[(a.s1 == b.s1 || a.s1 == b.s2) ? a.s1 : a.s2]);
            }
            auto E = [](double x, double y) { return 2.0 * std::sin(0.5 * (y - x)); };
            double cr = E(c[0], c[1]) * E(c[2], c[3]) / (E(c[1], c[2]) * E(c[3], c[0]));
            if (w2.graph.edges[F.edges[0]].f1 == f) cr = 1.0 / cr;
            double w = std::abs(w2.face_weight[f]);
            CHECK(std::abs(std::abs(cr) - w) < 1e-12 * w);
        }
    }

    TEST_CASE("Kasteleyn sign of face weights") {
        std::vector<WeightedGraph> square = {
            isoradial_weights(build_aztec(4), harnack::uniform_square(1)),
            isoradial_weights(build_aztec(2, 2), fixtures::random_square_genus0(2, 3)),
            isoradial_weights(build_aztec(5), fixtures::random_square_genus0(1, 5)),
            fock_weights(build_aztec(3), fixtures::square_genus1(), genus1_surface()),
        };
        for (const auto& wg : square)
            for (int f = 0; f < wg.graph.bounded; ++f) CHECK(wg.face_weight[f] < 0.0);
        std::vector<WeightedGraph> hex = {
            isoradial_weights(build_hexagon(3), harnack::uniform_hexagon_ramified()),
            fock_weights(build_hexagon(2), fixtures::hexagon_genus1()),
        };
        for (const auto& wg : hex)
            for (int f = 0; f < wg.graph.bounded; ++f) CHECK(wg.face_weight[f] > 0.0);

        // The circular-order product predicts the sign from the angles alone.
        auto S = fixtures::random_square_genus0(2, 9);
        DimerGraph g = build_aztec(3, 2);
        auto ang = strand_angles(g, S);
        for (int f = 0; f < g.bounded; ++f) CHECK(clustering_sign(g, ang, f) == -1);
        DimerGraph h = build_hexagon(3);
        auto hang = strand_angles(h, harnack::uniform_hexagon_ramified());
        for (int f = 0; f < h.bounded; ++f) CHECK(clustering_sign(h, hang, f) == 1);

        // Swapping beta+ and alpha- breaks clustering on some face.
        auto B = harnack::uniform_square(1);
        for (auto& m : B.points) {
            if (m.family == Family::Beta && m.sign == 1)
                m.angle = M_PI;
            else if (m.family == Family::Alpha && m.sign == -1)
                m.angle = 0.5 * M_PI;
        }
        auto bang = strand_angles(g = build_aztec(2), B);
        int wrong = 0;
        for (int f = 0; f < g.bounded; ++f) wrong += clustering_sign(g, bang, f) != -1;
        CHECK(wrong > 0);
        try {
            isoradial_weights(g, B);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::KasteleynViolation);
        }
    }

    TEST_CASE("face weights are gauge invariant") {
        WeightedGraph wg = fock_weights(build_aztec(3), fixtures::square_genus1(), genus1_surface());
        const DimerGraph& g = wg.graph;
        int w0 = g.edges[0].w;
        std::vector<cplx> K = wg.K;
        for (std::size_t e = 0; e < K.size(); ++e)
            if (g.edges[e].w == w0) K[e] *= 3.0;
        for (int f = 0; f < g.bounded; ++f) {
            double w = face_weight(g, K, f).real();
            CHECK(std::abs(w - wg.face_weight[f]) < 1e-12 * std::abs(wg.face_weight[f]));
        }
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> u(0.2, 5.0), ph(-M_PI, M_PI);
        std::vector<cplx> lam(g.vertices.size());
        for (auto& l : lam) l = std::polar(u(rng), ph(rng));
        for (std::size_t e = 0; e < K.size(); ++e) K[e] = lam[g.edges[e].w] * wg.K[e] * lam[g.edges[e].b];
        for (int f = 0; f < g.bounded; ++f) {
            cplx w = face_weight(g, K, f);
            CHECK(std::abs(w - wg.face_weight[f]) < 1e-12 * std::abs(wg.face_weight[f]));
        }
    }

    TEST_CASE("Fock face weights two ways") {
        auto S = fixtures::square_genus1();
        DimerGraph g = build_aztec(4);
        auto X = genus1_surface();
        WeightedGraph wg = fock_weights(g, S, X);
        auto ang = strand_angles(g, S);
        AbelMap eta = discrete_abel(g, *X, ang);
        for (int f = 0; f < g.bounded; ++f) {
            double w = fock_face_weight_theta(wg, *X, eta, f, ang);
            CHECK(std::abs(w - wg.face_weight[f]) < 1e-8 * std::abs(w));
        }
        auto H = fixtures::hexagon_genus1();
        auto XH = surface_for(H);
        WeightedGraph wh = fock_weights(build_hexagon(3), H, XH);
        auto hang = strand_angles(wh.graph, H);
        AbelMap heta = discrete_abel(wh.graph, *XH, hang);
        for (int f = 0; f < wh.graph.bounded; ++f) {
            double w = fock_face_weight_theta(wh, *XH, heta, f, hang);
            CHECK(std::abs(w - wh.face_weight[f]) < 1e-8 * std::abs(w));
        }
        CHECK_THROWS_AS(fock_weights(g, harnack::uniform_square(1)), Error);
    }

    TEST_CASE("quasi-periodic Fock weights") {
        auto S = fixtures::square_genus1();
        WeightedGraph wg = fock_weights(build_aztec(5), S, genus1_surface());
        const DimerGraph& g = wg.graph;
        double worst = 0.0;
        int pairs = 0;
        for (int f = 0; f < g.bounded; ++f)
            for (auto [dx, dy] : g.periods()) {
                int t = g.face_at(static_cast<int>(g.faces[f].lat[0]) + dx, static_cast<int>(g.faces[f].lat[1]) + dy);
                if (t < 0) continue;
                ++pairs;
                worst = std::max(worst, std::abs(wg.face_weight[t] / wg.face_weight[f] - 1.0));
            }
        CHECK(pairs > 20);
        CHECK(worst > 1e-3);
        CHECK_NOTHROW(check_kasteleyn(wg));
        CHECK(complex_determinant(wg) == doctest::Approx(partition_function(wg)).epsilon(1e-9));
    }

    TEST_CASE("partition function") {
        CHECK(partition_function(unit_weights(build_aztec(1))) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(partition_function(unit_weights(build_aztec(2))) == doctest::Approx(8.0).epsilon(1e-12));
        CHECK(partition_function(unit_weights(build_aztec(5))) == doctest::Approx(32768.0).epsilon(1e-10));
        CHECK(partition_function(unit_weights(build_hexagon(1))) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(partition_function(unit_weights(build_hexagon(2))) == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(partition_function(unit_weights(build_hexagon(3))) == doctest::Approx(980.0).epsilon(1e-12));

        for (unsigned seed = 1; seed <= 5; ++seed) {
            WeightedGraph wg = isoradial_weights(build_aztec(1, 2), fixtures::random_square_genus0(2, seed));
            double z = brute_partition(wg);
            CHECK(std::abs(partition_function(wg) - z) < 1e-9 * z);
            CHECK(std::abs(complex_determinant(wg) - z) < 1e-9 * z);
        }
        WeightedGraph a2 = isoradial_weights(build_aztec(2), fixtures::random_square_genus0(1, 21));
        CHECK(std::abs(partition_function(a2) - brute_partition(a2)) < 1e-9 * brute_partition(a2));
        WeightedGraph h1 = fock_weights(build_hexagon(1), fixtures::hexagon_genus1());
        CHECK(std::abs(partition_function(h1) - brute_partition(h1)) < 1e-9 * brute_partition(h1));
        WeightedGraph h2 = fock_weights(build_hexagon(2), fixtures::hexagon_genus1());
        CHECK(std::abs(partition_function(h2) - brute_partition(h2)) < 1e-9 * brute_partition(h2));

        DimerGraph g = build_aztec(3);
        std::vector<int> sigma = kasteleyn_signs(g);
        for (int f = 0; f < g.bounded; ++f) {
            int p = 1;
            for (int e : g.faces[f].edges) p *= sigma[e];
            CHECK(p == expected_sign(4));
        }

        DimerGraph a1 = build_aztec(1);
        std::vector<cplx> K(a1.edges.size(), 1.0);
        int w = a1.edges[0].w;
        for (std::size_t e = 0; e < K.size(); ++e)
            if (a1.edges[e].w == w) K[e] = 0.0;
        try {
            partition_function(with_edge_weights(a1, K));
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingularMatrix);
        }
    }

    TEST_CASE("heights of the two A_1 matchings") {
        DimerGraph g = build_aztec(1);
        auto ms = enumerate_matchings(g);
        REQUIRE(ms.size() == 2);
        HeightField h0 = height_from_matching(g, ms[0]), h1 = height_from_matching(g, ms[1]);
        for (std::size_t f = g.bounded; f < g.faces.size(); ++f) CHECK(h0.h[f] == h1.h[f]);
        CHECK(std::abs(h0.h[0] - h1.h[0]) == doctest::Approx(1.0));
        CHECK(h0.h[pin_face(g)] == 0.0);
        CHECK_THROWS_AS(height_from_matching(g, {ms[0][0]}), Error);
    }

    TEST_CASE("matching and height bijection") {
        for (const DimerGraph& g : {build_aztec(2), build_aztec(3), build_hexagon(1), build_hexagon(2)}) {
            auto ms = enumerate_matchings(g);
            HeightField B = boundary_height(g);
            std::set<std::vector<double>> seen;
            for (const auto& m : ms) {
                HeightField h = height_from_matching(g, m);
                CHECK(matching_from_height(g, h) == m);
                for (std::size_t f = g.bounded; f < g.faces.size(); ++f) CHECK(std::abs(h.h[f] - B.h[f]) < 1e-12);
                for (int f = 0; f < g.bounded; ++f) {
                    double d = h.h[f] - height_from_matching(g, ms[0]).h[f];
                    CHECK(std::abs(d - std::round(d)) < 1e-12);
                }
                seen.insert(h.h);
            }
            CHECK(seen.size() == ms.size());
        }
    }

    TEST_CASE("aztec boundary staircase") {
        for (int N : {4, 9, 16}) {
            DimerGraph g = build_aztec(N);
            HeightField B = boundary_height(g);
            auto s = scaled_height(g, B);
            double worst = 0.0;
            for (std::size_t f = g.bounded; f < g.faces.size(); ++f) {
                Vec2 p = g.faces[f].pos;
                double u = std::clamp(p[0], -1.0, 1.0), v = std::clamp(p[1], -1.0, 1.0);
                double want = 0.0;
                if (p[1] > 1.0 - 1.5 / N) want = u + 1.0;
                if (p[0] > 1.0 - 1.5 / N) want = v + 1.0;
                if (p[1] > 1.0 - 1.5 / N && p[0] > 1.0 - 1.5 / N) want = u + v;
                if (p[1] < -1.0 + 1.5 / N || p[0] < -1.0 + 1.5 / N) want = 0.0;
                worst = std::max(worst, std::abs(s[f] - want));
            }
            CHECK(worst < 2.0 / N);
            CHECK(s[pin_face(g)] == doctest::Approx(0.0).epsilon(1e-12));
        }
        // the same staircase for n = 2 after scaling
        DimerGraph g2 = build_aztec(3, 2);
        auto s2 = scaled_height(g2, boundary_height(g2));
        double top = *std::max_element(s2.begin() + g2.bounded, s2.end());
        CHECK(top == doctest::Approx(4.0).epsilon(0.2));
    }

    TEST_CASE("height weights reproduce matching weights") {
        WeightedGraph wg = isoradial_weights(build_aztec(1, 2), fixtures::random_square_genus0(2, 13));
        const DimerGraph& g = wg.graph;
        auto ms = enumerate_matchings(g);
        REQUIRE(ms.size() == 8);
        auto logW = [&](const Matching& m) {
            HeightField h = height_from_matching(g, m);
            double s = 0.0;
            for (int f = 0; f < g.bounded; ++f) s += h.h[f] * wg.log_face_weight[f];
            return s;
        };
        for (const auto& a : ms)
            for (const auto& b : ms) {
                double lhs = logW(a) - logW(b);
                double rhs = log_matching_weight(wg.log_abs_K, a) - log_matching_weight(wg.log_abs_K, b);
                CHECK(std::abs(std::exp(lhs - rhs) - 1.0) < 1e-10);
            }
    }

    TEST_CASE("weighted graph container") {
        CHECK(fnv1a("") == 0xcbf29ce484222325ull);
        CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
        auto S = fixtures::square_genus1();
        WeightedGraph wg = fock_weights(build_aztec(3), S, genus1_surface());
        Container c = to_container(wg);
        Container d = decode(encode(c));
        CHECK(d.N == 3);
        CHECK(d.genus == 1);
        CHECK(d.vertices == c.vertices);
        CHECK(d.edge_w == c.edge_w);
        CHECK(d.edge_b == c.edge_b);
        CHECK(d.log_abs_K == c.log_abs_K);
        CHECK(d.phase == c.phase);
        CHECK(d.face_offset == c.face_offset);
        CHECK(d.face_edges == c.face_edges);
        CHECK(d.log_abs_W == c.log_abs_W);
        CHECK(d.sign_W == c.sign_W);
        CHECK(d.face_offset.size() == static_cast<std::size_t>(wg.graph.bounded + 1));
        std::string bytes = encode(c);
        CHECK_THROWS_AS(decode(bytes.substr(0, bytes.size() - 3)), Error);
        CHECK_THROWS_AS(decode("XXXX" + bytes.substr(4)), Error);

        nlohmann::json doc = harnack::to_json(S);
        auto side = sidecar(wg, doc, {{"series_eps", 1e-10}});
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(doc.dump())));
        CHECK(side["harnack_fnv1a"] == std::string(buf));
        CHECK(side["faces"] == wg.graph.bounded);
    }
}
