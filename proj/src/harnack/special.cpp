#include "dimer/harnack/special.hpp"

#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>

namespace dimer::harnack {

namespace {

constexpr double PI2_6 = M_PI * M_PI / 6.0;
constexpr int NB = 24;

// B_n / (n+1)! for the expansion Li2(z) = sum B_n u^{n+1}/(n+1)!, u = -log(1 - z).
const std::array<double, NB>& bernoulli_coeffs() {
    static const std::array<double, NB> c = [] {
        std::array<double, NB> out{};
        for (int k = 0; k < NB; ++k) {
            int n = 2 * k;
            out[k] = boost::math::bernoulli_b2n<double>(k) / boost::math::factorial<double>(n + 1);
        }
        return out;
    }();
    return c;
}

cplx dilog_core(cplx z) {
    cplx u = -std::log(1.0 - z);
    cplx u2 = u * u;
    // B_1 = -1/2 is the only odd Bernoulli number.
    cplx sum = u - 0.25 * u2;
    cplx p = u;
    const auto& c = bernoulli_coeffs();
    for (int k = 1; k < NB; ++k) {
        p *= u2;
        cplx term = c[k] * p;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

cplx dilog(cplx z) {
    if (z == 0.0) return 0.0;
    if (z == 1.0) return PI2_6;
    if (std::abs(z) > 1.0) {
        cplx l = std::log(-z);
        cplx w = 1.0 / z;
        cplx inner = std::real(w) > 0.5 ? -dilog_core(1.0 - w) + PI2_6 - std::log(w) * std::log(1.0 - w)
                                        : dilog_core(w);
        return -inner - PI2_6 - 0.5 * l * l;
    }
    if (std::real(z) > 0.5) return -dilog_core(1.0 - z) + PI2_6 - std::log(z) * std::log(1.0 - z);
    return dilog_core(z);
}

double bloch_wigner(cplx z) {
    if (z == 0.0 || z == 1.0) return 0.0;
    return std::imag(dilog(z)) + std::arg(1.0 - z) * std::log(std::abs(z));
}

double lobachevsky(double theta) {
    // L(theta) = Cl2(2 theta) / 2 and Cl2(phi) = Im Li2(e^{i phi}).
    return 0.5 * std::imag(dilog(std::polar(1.0, 2.0 * theta)));
}

}  // namespace dimer::harnack
