#include "dimer/harnack/admissibility.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace dimer::harnack {

namespace {

void require_ramified(const HarnackData& S) {
    if (S.lattice != Lattice::Hexagonal || S.cover != Cover::Ramified)
        throw Error(ErrorCode::InvalidArgument, "admissibility optimizer needs ramified hexagon data");
}

// Minus angles in a fixed order; plus angles are their antipodes.
std::vector<int> minus_slots(const HarnackData& S) {
    std::vector<int> out;
    for (std::size_t i = 0; i < S.points.size(); ++i)
        if (S.points[i].sign == -1) out.push_back(static_cast<int>(i));
    return out;
}

HarnackData moved(const HarnackData& S, const std::vector<int>& slots, const Eigen::VectorXd& dx) {
    HarnackData T = S;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        auto& m = T.points[slots[k]];
        m.angle = wrap_angle(m.angle + dx(k));
        for (auto& q : T.points)
            if (q.sign == 1 && q.family == m.family && q.index == m.index) q.angle = wrap_angle(m.angle + M_PI);
    }
    return T;
}

bool clustered(const HarnackData& S) {
    try {
        check_clustering(S);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

cplx f3_at_branch(const HarnackData& S, riemann::SeriesOptions opt) {
    StandardDifferentials d(S, opt);
    return d.f(0.0)[2];
}

std::vector<std::vector<double>> admissibility_jacobian(const HarnackData& S, double h) {
    require_ramified(S);
    auto slots = minus_slots(S);
    const int m = static_cast<int>(slots.size());
    std::vector<std::vector<double>> J(2, std::vector<double>(m));
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e(k) = h;
        cplx fp = f3_at_branch(moved(S, slots, e));
        cplx fm = f3_at_branch(moved(S, slots, -e));
        cplx df = (fp - fm) / (2.0 * h);
        J[0][k] = df.real();
        J[1][k] = df.imag();
    }
    return J;
}

AdmissifyResult optimize_ramified_admissibility(const HarnackData& S, double tol, int max_iter) {
    require_ramified(S);
    validate(S);
    auto slots = minus_slots(S);
    const int m = static_cast<int>(slots.size());
    AdmissifyResult out;
    out.data = S;
    cplx f = f3_at_branch(S);
    int it = 0;
    for (; it < max_iter && std::abs(f) >= tol; ++it) {
        auto J = admissibility_jacobian(out.data);
        Eigen::MatrixXd A(2, m);
        for (int k = 0; k < m; ++k) {
            A(0, k) = J[0][k];
            A(1, k) = J[1][k];
        }
        Eigen::Vector2d r(f.real(), f.imag());
        // Minimum-norm step: A^T (A A^T)^{-1} r.
        Eigen::Matrix2d AAt = A * A.transpose();
        if (std::abs(AAt.determinant()) < 1e-300)
            throw Error(ErrorCode::NoConvergence, "admissibility Jacobian is rank deficient");
        Eigen::VectorXd step = -A.transpose() * AAt.ldlt().solve(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, lambda *= 0.5) {
            HarnackData T = moved(out.data, slots, lambda * step);
            if (!clustered(T)) continue;
            cplx fn = f3_at_branch(T);
            if (std::abs(fn) < std::abs(f) || std::abs(fn) < tol) {
                out.data = std::move(T);
                f = fn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    out.iterations = it;
    out.residual = std::abs(f);
    if (!(out.residual < tol)) {
        std::ostringstream os;
        os << "admissibility solve stopped after " << it << " iterations with |f3(0)| = " << out.residual;
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    for (int k = 0; k < m; ++k) {
        double d = std::remainder(out.data.points[slots[k]].angle - S.points[slots[k]].angle, 2.0 * M_PI);
        out.displacement = std::max(out.displacement, std::abs(d));
    }
    return out;
}

double ell(const StandardDifferentials& d, double theta) {
    const auto& S = d.data();
    double r = S.circles[S.central].radius;
    cplx R = std::polar(r, -theta);
    auto a = d.zeta(R);
    auto b = d.zeta(-R);
    return (b[2] - a[2]).real();
}

UnramifiedCheck check_unramified_admissibility(const HarnackData& S, int samples) {
    if (S.lattice != Lattice::Hexagonal || S.cover != Cover::Unramified || S.central < 0)
        throw Error(ErrorCode::InvalidArgument, "unramified check needs hexagon data with a central circle");
    StandardDifferentials d(S);
    UnramifiedCheck out;
    const double h = 2.0 * M_PI / samples;
    // Offset grid so that symmetric zeros do not land on sample points.
    const double t0 = 0.3183 * h;
    std::vector<double> v(samples + 1);
    for (int k = 0; k <= samples; ++k) v[k] = ell(d, t0 + k * h);
    for (int k = 0; k < samples; ++k) {
        double a = t0 + k * h, b = a + h;
        double fa = v[k], fb = v[k + 1];
        if (fa == 0.0) {
            out.zeros.push_back(a);
            ++out.sign_changes;
            continue;
        }
        if (fa * fb > 0.0 || fb == 0.0) continue;
        ++out.sign_changes;
        boost::uintmax_t iters = 100;
        auto bracket = boost::math::tools::toms748_solve([&](double t) { return ell(d, t); }, a, b, fa, fb,
                                                         boost::math::tools::eps_tolerance<double>(50), iters);
        out.zeros.push_back(wrap_angle(0.5 * (bracket.first + bracket.second)));
    }
    std::sort(out.zeros.begin(), out.zeros.end());
    if (out.zeros.size() == 6) {
        out.admissible = true;
        for (int k = 0; k < 3 && out.admissible; ++k) {
            double partner = out.zeros[k] + M_PI;
            bool found = false;
            for (double z : out.zeros)
                if (std::abs(std::remainder(z - partner, 2.0 * M_PI)) < 1e-6) found = true;
            out.admissible = found;
        }
        double r = S.circles[S.central].radius;
        if (out.admissible)
            for (int k = 0; k < 3; ++k) {
                cplx R = std::polar(r, -out.zeros[k]);
                out.pairs.push_back({R, -R});
            }
    }
    return out;
}

}  // namespace dimer::harnack
