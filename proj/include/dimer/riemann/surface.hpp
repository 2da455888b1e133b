#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dimer/riemann/series.hpp"
#include "dimer/riemann/theta.hpp"

namespace dimer::riemann {

// Piecewise Gauss-Legendre integral of f(z) dz along a polyline.
cplx integrate_polyline(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts,
                        double max_piece = 0.05);
// Integral of f(z) dz along a full circle, counterclockwise.
cplx integrate_circle(const std::function<cplx(cplx)>& f, cplx center, double radius, int nodes = 512);

// M-curve given by a Schottky circle domain: holomorphic differentials,
// Abel map, period matrix, theta function and prime form.
class Surface {
  public:
    Surface() = default;
    Surface(SchottkyGroup group, double base_angle, SeriesOptions opt = {});

    int genus() const { return group_.genus(); }
    const SchottkyGroup& group() const { return group_; }
    double base_angle() const { return tq_; }
    SeriesOptions options() const { return opt_; }

    // omega_k(z), k = 0..g-1 (normalized: clockwise a-periods are delta_jk).
    VecC omega(cplx z) const;
    // omega_k(e^{it}) i e^{it}, real on S^1.
    VecR omega_circle(double t) const;
    const DifferentialSeries& omega_series(int k) const { return omegas_[k]; }

    // Abel map on S^1 from the base angle, counterclockwise, t taken in
    // [base, base + 2 pi).  Real valued.
    VecR abel_circle(double t) const;
    // Abel map at an arbitrary point: along S^1 to arg z, then radially.
    VecC abel(cplx z) const;
    // Independent oracle: Gauss-Legendre along the same path.
    VecC abel_quadrature(cplx z) const;

    // Clockwise a-periods by quadrature on circles slightly outside C_j.
    MatC a_periods() const;
    // b-periods by quadrature from S^1 to C_j, reflected through tau.
    const MatC& period_matrix() const { return B_; }
    const Theta& theta() const { return theta_; }

    // Prime form in the angle coordinate of S^1.  E ~ (b - a) near the diagonal.
    double prime_form(double a, double b) const;
    double prime_form(double a, double b, const Characteristic& ch) const;
    const Characteristic& characteristic() const { return ch_; }
    // Odd characteristics whose spinor keeps a fixed sign on S^1, best first.
    const std::vector<Characteristic>& usable_characteristics() const { return usable_; }

    double wrap(double t) const;

  private:
    MatC compute_b_periods() const;
    void choose_characteristic();

    SchottkyGroup group_;
    double tq_ = 0.0;
    SeriesOptions opt_;
    std::vector<DifferentialSeries> omegas_;
    std::vector<cplx> fa_, fb_;
    std::vector<unsigned char> fb_finite_;
    VecR abel_q_;
    MatC B_;
    Theta theta_;
    Characteristic ch_;
    std::vector<Characteristic> usable_;
    std::vector<VecR> usable_grad_;
    std::vector<double> usable_sign_;
    VecR grad0_;
    double sign_ = 1.0;
};

}  // namespace dimer::riemann
