#include "dimer/riemann/theta.hpp"

#include <cmath>

namespace dimer::riemann {

Characteristic Characteristic::zero(int g) { return {VecR::Zero(g), VecR::Zero(g)}; }

int Characteristic::parity() const {
    long s = std::lround(4.0 * d1.dot(d2));
    return static_cast<int>(((s % 2) + 2) % 2);
}

bool Characteristic::odd() const { return parity() == 1; }

std::vector<Characteristic> characteristics(int g, bool odd) {
    std::vector<Characteristic> out;
    for (int a = 0; a < (1 << g); ++a)
        for (int b = 0; b < (1 << g); ++b) {
            Characteristic c{VecR::Zero(g), VecR::Zero(g)};
            for (int i = 0; i < g; ++i) {
                c.d1(i) = (a >> i) & 1 ? 0.5 : 0.0;
                c.d2(i) = (b >> i) & 1 ? 0.5 : 0.0;
            }
            if (c.odd() == odd) out.push_back(c);
        }
    return out;
}

Theta::Theta(MatC B, double eps) : B_(std::move(B)) {
    const int g = genus();
    if (B_.cols() != g) throw Error(ErrorCode::BadPeriodMatrix, "period matrix not square");
    if ((B_ - B_.transpose()).cwiseAbs().maxCoeff() > 1e-8)
        throw Error(ErrorCode::BadPeriodMatrix, "period matrix not symmetric");
    Y_ = B_.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(Y_);
    if (g > 0 && llt.info() != Eigen::Success)
        throw Error(ErrorCode::BadPeriodMatrix, "Im B is not positive definite");
    Yinv_ = g > 0 ? Eigen::MatrixXd(llt.solve(Eigen::MatrixXd::Identity(g, g))) : Eigen::MatrixXd();
    // Terms with pi n^T Y n > R^2 are below eps relative to the peak; the
    // Gaussian tail beyond the ellipsoid adds a polynomial factor, hence the margin.
    radius2_ = std::log(1.0 / eps) + 3.0 * g + 6.0;
}

cplx Theta::value(const VecC& z, const Characteristic* ch) const { return sum(z, ch, nullptr); }

cplx Theta::value_grad(const VecC& z, const Characteristic* ch, VecC& grad) const {
    grad = VecC::Zero(genus());
    return sum(z, ch, &grad);
}

cplx Theta::sum(const VecC& z, const Characteristic* ch, VecC* grad) const {
    const int g = genus();
    terms_ = 0;
    if (g == 0) return 1.0;
    VecR d1 = ch ? ch->d1 : VecR::Zero(g);
    VecR d2 = ch ? ch->d2 : VecR::Zero(g);
    // Peak of the Gaussian in n = m + d1.
    VecR y = z.imag();
    VecR nstar = -Yinv_ * y;
    std::vector<int> lo(g), hi(g), m(g);
    for (int i = 0; i < g; ++i) {
        double half = std::sqrt(radius2_ / M_PI * Yinv_(i, i));
        lo[i] = static_cast<int>(std::floor(nstar(i) - d1(i) - half));
        hi[i] = static_cast<int>(std::ceil(nstar(i) - d1(i) + half));
        m[i] = lo[i];
    }
    const cplx ipi(0.0, M_PI);
    VecC zs = z + d2.cast<cplx>();
    cplx total = 0.0;
    VecR n(g);
    for (;;) {
        for (int i = 0; i < g; ++i) n(i) = m[i] + d1(i);
        VecR dn = n - nstar;
        if (M_PI * dn.dot(Y_ * dn) <= radius2_) {
            cplx q = 0.0, lin = 0.0;
            for (int i = 0; i < g; ++i) {
                for (int j = 0; j < g; ++j) q += n(i) * B_(i, j) * n(j);
                lin += zs(i) * n(i);
            }
            cplx t = std::exp(ipi * q + 2.0 * ipi * lin);
            total += t;
            if (grad)
                for (int i = 0; i < g; ++i) (*grad)(i) += 2.0 * ipi * n(i) * t;
            ++terms_;
        }
        int i = 0;
        while (i < g && ++m[i] > hi[i]) {
            m[i] = lo[i];
            ++i;
        }
        if (i == g) break;
    }
    return total;
}

}  // namespace dimer::riemann
