#include "dimer/lattice/weights.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

namespace dimer::lattice {

using harnack::Cover;
using harnack::HarnackData;
using harnack::Lattice;

namespace {

constexpr double kThetaFloor = 1e-8;

double base_angle(const HarnackData& S) {
    int s = S.lattice == Lattice::Hexagonal && S.cover == Cover::None ? 0 : -1;
    return harnack::wrap_angle(S.angles(Family::Alpha, s).front() + 1e-3);
}

int corner_face(const DimerGraph& g) {
    int best = 0;
    double bd = 1e300;
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        const Vec2 p = g.faces[f].pos;
        double d = std::hypot(p[0] + 1.0, p[1] + 1.0);
        if (d < bd - 1e-12) {
            bd = d;
            best = static_cast<int>(f);
        }
    }
    return best;
}

std::vector<cplx> weights_from_log(const std::vector<double>& la, const std::vector<double>& ph) {
    std::vector<cplx> out(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) out[i] = std::polar(std::exp(la[i]), ph[i]);
    return out;
}

void fill_faces(WeightedGraph& wg) {
    const DimerGraph& g = wg.graph;
    wg.log_abs_K.resize(wg.K.size());
    for (std::size_t e = 0; e < wg.K.size(); ++e) wg.log_abs_K[e] = std::log(std::abs(wg.K[e]));
    wg.face_weight.assign(g.faces.size(), 1.0);
    wg.log_face_weight.assign(g.faces.size(), 0.0);
    for (int f = 0; f < g.bounded; ++f) {
        double lw = 0.0, ph = 0.0;
        for (int e : g.faces[f].edges) {
            double s = g.edges[e].f2 == f ? 1.0 : -1.0;
            lw += s * wg.log_abs_K[e];
            ph += s * std::arg(wg.K[e]);
        }
        cplx u = std::polar(1.0, ph);
        wg.log_face_weight[f] = lw;
        wg.face_weight[f] = std::exp(lw) * (u.real() >= 0 ? 1.0 : -1.0);
    }
}

}  // namespace

std::vector<double> strand_angles(const DimerGraph& g, const HarnackData& S) {
    if ((g.region == RegionType::Aztec) != (S.lattice == Lattice::Square))
        throw Error(ErrorCode::InvalidArgument, "region and lattice type differ");
    if (S.n != g.n) throw Error(ErrorCode::InvalidArgument, "period of the graph and the data differ");
    double scale = 1.0;
    int sign_override = 0;
    bool use_sign = true;
    if (S.lattice == Lattice::Hexagonal) {
        if (S.cover == Cover::Unramified)
            throw Error(ErrorCode::NotImplemented, "lattice weights for unramified hexagon covers");
        if (S.cover == Cover::Ramified) {
            if (S.genus() > 0)
                throw Error(ErrorCode::NotImplemented, "lattice weights for ramified covers of genus >= 1");
            scale = 2.0;  // base curve w = z^2
            sign_override = -1;
            use_sign = false;
        }
    }
    std::vector<double> out(g.strands.size());
    for (std::size_t k = 0; k < g.strands.size(); ++k) {
        const Strand& s = g.strands[k];
        int sign = use_sign ? s.sign : sign_override;
        auto a = S.angles(s.family, sign);
        if (static_cast<int>(a.size()) != S.n) {
            std::ostringstream os;
            os << "expected " << S.n << " labels for a strand family, found " << a.size();
            throw Error(ErrorCode::SchemaError, os.str());
        }
        out[k] = harnack::wrap_angle(scale * a[s.index]);
    }
    return out;
}

AbelMap discrete_abel(const DimerGraph& g, const riemann::Surface& X, const std::vector<double>& angles) {
    const int gen = X.genus();
    AbelMap A;
    A.strand.resize(g.strands.size());
    for (std::size_t k = 0; k < g.strands.size(); ++k) A.strand[k] = X.abel_circle(angles[k]);
    const int V = static_cast<int>(g.vertices.size());
    const int F = static_cast<int>(g.faces.size());
    std::vector<VecR> eta(V + F);
    std::vector<char> known(V + F, 0);

    struct Rel {
        int to, edge, kind;  // eta(to) = eta(from) + sign * offset(kind)
        double sign;
    };
    // kind: 0 -> A1, 1 -> A2, 2 -> A1 + A2, 3 -> A1 - A2
    std::vector<std::vector<Rel>> adj(V + F);
    auto link = [&](int a, int b, int e, int kind) {
        // eta(b) = eta(a) - offset for kinds 0..2, eta(b) = eta(a) + offset for kind 3
        double s = kind == 3 ? 1.0 : -1.0;
        adj[a].push_back({b, e, kind, s});
        adj[b].push_back({a, e, kind, -s});
    };
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        int w = ed.w, b = ed.b, f1 = V + ed.f1, f2 = V + ed.f2;
        link(w, f1, static_cast<int>(e), 0);
        link(w, f2, static_cast<int>(e), 1);
        link(w, b, static_cast<int>(e), 2);
        link(f1, f2, static_cast<int>(e), 3);
    }
    auto offset = [&](int e, int kind) -> VecR {
        const VecR& a1 = A.strand[g.edges[e].s1];
        const VecR& a2 = A.strand[g.edges[e].s2];
        switch (kind) {
            case 0: return a1;
            case 1: return a2;
            case 2: return a1 + a2;
            default: return a1 - a2;
        }
    };

    int start = V + corner_face(g);
    eta[start] = VecR::Zero(gen);
    known[start] = 1;
    std::deque<int> q{start};
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (const Rel& r : adj[a]) {
            if (known[r.to]) continue;
            eta[r.to] = eta[a] + r.sign * offset(r.edge, r.kind);
            known[r.to] = 1;
            q.push_back(r.to);
        }
    }
    double worst = 0.0;
    for (int a = 0; a < V + F; ++a)
        for (const Rel& r : adj[a]) {
            if (gen == 0) break;
            VecR d = eta[r.to] - eta[a] - r.sign * offset(r.edge, r.kind);
            worst = std::max(worst, d.cwiseAbs().maxCoeff());
        }
    if (worst > 1e-8) {
        std::ostringstream os;
        os << "discrete Abel map is not single valued (cycle defect " << worst << ")";
        throw Error(ErrorCode::InconsistentLabeling, os.str());
    }
    A.vertex.assign(eta.begin(), eta.begin() + V);
    A.face.assign(eta.begin() + V, eta.end());
    return A;
}

double WeightedGraph::activity(int f) const {
    return expected_sign(graph.faces[f].degree()) * face_weight[f];
}

cplx face_weight(const DimerGraph& g, const std::vector<cplx>& K, int f) {
    cplx w = 1.0;
    for (int e : g.faces[f].edges) w = g.edges[e].f2 == f ? w * K[e] : w / K[e];
    return w;
}

int expected_sign(int degree) { return (degree / 2 + 1) % 2 == 0 ? 1 : -1; }

int clustering_sign(const DimerGraph& g, const std::vector<double>& angles, int f) {
    const Face& F = g.faces[f];
    const int d = F.degree();
    std::vector<int> corner(d);
    for (int k = 0; k < d; ++k) {
        const Edge& a = g.edges[F.edges[(k + d - 1) % d]];
        const Edge& b = g.edges[F.edges[k]];
        corner[k] = (a.s1 == b.s1 || a.s1 == b.s2) ? a.s1 : a.s2;
    }
    int start = g.vertices[F.verts[0]].black ? 1 : 0;
    auto c = [&](int j) { return std::polar(1.0, angles[corner[(start + j + 2 * d) % d]]); };
    cplx num = 1.0, den = 1.0;
    for (int k = 0; k < d / 2; ++k) {
        num *= c(2 * k + 1) - c(2 * k);
        den *= c(2 * k) - c(2 * k - 1);
    }
    cplx r = num / den;
    return r.real() >= 0 ? 1 : -1;
}

void check_kasteleyn(const WeightedGraph& wg) {
    const DimerGraph& g = wg.graph;
    for (int f = 0; f < g.bounded; ++f) {
        cplx w = face_weight(g, wg.K, f);
        int want = expected_sign(g.faces[f].degree());
        if (std::abs(w.imag()) > 1e-8 * std::abs(w) || (w.real() > 0 ? 1 : -1) != want) {
            std::ostringstream os;
            os << "face at (" << g.faces[f].lat[0] << ", " << g.faces[f].lat[1] << ") has weight " << w
               << ", sign must be " << want;
            throw Error(ErrorCode::KasteleynViolation, os.str());
        }
    }
}

WeightedGraph with_edge_weights(const DimerGraph& g, std::vector<cplx> K) {
    if (K.size() != g.edges.size()) throw Error(ErrorCode::InvalidArgument, "one weight per edge expected");
    WeightedGraph wg;
    wg.graph = g;
    wg.K = std::move(K);
    fill_faces(wg);
    return wg;
}

WeightedGraph isoradial_weights(const DimerGraph& g, const HarnackData& S) {
    if (S.genus() != 0) throw Error(ErrorCode::InvalidArgument, "isoradial weights need genus 0");
    auto ang = strand_angles(g, S);
    std::vector<cplx> K(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        K[e] = std::polar(1.0, ang[g.edges[e].s1]) - std::polar(1.0, ang[g.edges[e].s2]);
    WeightedGraph wg = with_edge_weights(g, std::move(K));
    check_kasteleyn(wg);
    return wg;
}

WeightedGraph fock_weights(const DimerGraph& g, const HarnackData& S, std::shared_ptr<const riemann::Surface> X,
                           unsigned seed) {
    if (S.genus() == 0) throw Error(ErrorCode::InvalidArgument, "Fock weights need genus >= 1");
    auto ang = strand_angles(g, S);
    if (!X) X = std::make_shared<riemann::Surface>(riemann::SchottkyGroup(S.circles), base_angle(S));
    const int gen = X->genus();
    AbelMap eta = discrete_abel(g, *X, ang);

    VecR D = VecR::Zero(gen);
    if (static_cast<int>(S.D.size()) == gen)
        for (int k = 0; k < gen; ++k) D(k) = S.D[k];
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> th(g.faces.size());
    for (int attempt = 0;; ++attempt) {
        double low = 1e300;
        for (std::size_t f = 0; f < g.faces.size(); ++f) {
            th[f] = X->theta()(VecR(eta.face[f] + D).cast<cplx>()).real();
            low = std::min(low, std::abs(th[f]));
        }
        if (low >= kThetaFloor) break;
        if (attempt == 10) throw Error(ErrorCode::ThetaZeroHit, "theta(eta + D) vanishes after 10 draws of D");
        for (int k = 0; k < gen; ++k) D(k) = unif(rng);
    }

    std::vector<double> la(g.edges.size()), ph(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        double E = X->prime_form(ang[ed.s1], ang[ed.s2]);
        double k = E / (th[ed.f1] * th[ed.f2]);
        la[e] = std::log(std::abs(k));
        ph[e] = k >= 0 ? 0.0 : M_PI;
    }
    WeightedGraph wg = with_edge_weights(g, weights_from_log(la, ph));
    wg.genus = gen;
    wg.D.assign(D.data(), D.data() + gen);
    check_kasteleyn(wg);
    return wg;
}

WeightedGraph weights(const DimerGraph& g, const HarnackData& S) {
    return S.genus() == 0 ? isoradial_weights(g, S) : fock_weights(g, S);
}

double fock_face_weight_theta(const WeightedGraph& wg, const riemann::Surface& X, const AbelMap& eta, int f,
                              const std::vector<double>& angles) {
    const DimerGraph& g = wg.graph;
    VecR D = VecR::Zero(X.genus());
    for (int k = 0; k < X.genus(); ++k) D(k) = wg.D[k];
    auto th = [&](int face) { return X.theta()(VecR(eta.face[face] + D).cast<cplx>()).real(); };
    double w = 1.0;
    for (int e : g.faces[f].edges) {
        const Edge& ed = g.edges[e];
        VecR d = X.abel_circle(angles[ed.s2]) - X.abel_circle(angles[ed.s1]);
        double t = X.theta().value(d.cast<cplx>(), &X.characteristic()).real() / (th(ed.f1) * th(ed.f2));
        w = ed.f2 == f ? w * t : w / t;
    }
    return w;
}

std::vector<int> kasteleyn_signs(const DimerGraph& g) {
    const int V = static_cast<int>(g.vertices.size());
    std::vector<int> sigma(g.edges.size(), 0);
    std::vector<std::vector<int>> inc(V);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        inc[g.edges[e].w].push_back(static_cast<int>(e));
        inc[g.edges[e].b].push_back(static_cast<int>(e));
    }
    std::vector<char> seen(V, 0);
    for (int r = 0; r < V; ++r) {
        if (seen[r]) continue;
        seen[r] = 1;
        std::deque<int> q{r};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int e : inc[v]) {
                int o = g.edges[e].w == v ? g.edges[e].b : g.edges[e].w;
                if (seen[o]) continue;
                seen[o] = 1;
                sigma[e] = 1;
                q.push_back(o);
            }
        }
    }
    std::vector<int> open(g.bounded, 0);
    std::deque<int> ready;
    for (int f = 0; f < g.bounded; ++f) {
        for (int e : g.faces[f].edges) open[f] += sigma[e] == 0;
        if (open[f] == 1) ready.push_back(f);
    }
    while (!ready.empty()) {
        int f = ready.front();
        ready.pop_front();
        if (open[f] != 1) continue;
        int free_edge = -1, prod = 1;
        for (int e : g.faces[f].edges) {
            if (sigma[e] == 0)
                free_edge = e;
            else
                prod *= sigma[e];
        }
        sigma[free_edge] = prod * expected_sign(g.faces[f].degree());
        for (int h : {g.edges[free_edge].f1, g.edges[free_edge].f2})
            if (h < g.bounded && --open[h] == 1) ready.push_back(h);
    }
    for (auto& s : sigma)
        if (s == 0) s = 1;  // edges separating two pendants only
    return sigma;
}

namespace {

Eigen::MatrixXcd kasteleyn_matrix(const WeightedGraph& wg, bool complex_weights) {
    const DimerGraph& g = wg.graph;
    std::vector<int> row(g.vertices.size(), -1), col(g.vertices.size(), -1);
    int nw = 0, nb = 0;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) (g.vertices[v].black ? col[v] = nb++ : row[v] = nw++);
    if (nw != nb) throw Error(ErrorCode::SingularMatrix, "black and white counts differ");
    std::vector<int> sigma;
    if (!complex_weights) sigma = kasteleyn_signs(g);
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(nw, nb);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        K(row[ed.w], col[ed.b]) = complex_weights ? wg.K[e] : cplx(sigma[e] * std::abs(wg.K[e]));
    }
    return K;
}

double log_abs_det(const Eigen::MatrixXcd& K) {
    if (K.rows() == 0) return 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
    const auto& U = lu.matrixLU();
    double s = 0.0, scale = K.cwiseAbs().maxCoeff();
    for (int i = 0; i < U.rows(); ++i) {
        double a = std::abs(U(i, i));
        if (!(a > 1e-13 * scale)) throw Error(ErrorCode::SingularMatrix, "Kasteleyn matrix is singular");
        s += std::log(a);
    }
    return s;
}

}  // namespace

double log_partition_function(const WeightedGraph& wg) { return log_abs_det(kasteleyn_matrix(wg, false)); }

double partition_function(const WeightedGraph& wg) {
    if (wg.graph.vertices.size() > 4000) throw Error(ErrorCode::TooLarge, "graph too large for a dense determinant");
    return std::exp(log_partition_function(wg));
}

double complex_determinant(const WeightedGraph& wg) { return std::exp(log_abs_det(kasteleyn_matrix(wg, true))); }

}  // namespace dimer::lattice
