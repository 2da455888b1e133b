#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dimer/harnack/data.hpp"
#include "dimer/riemann/series.hpp"

namespace dimer::harnack {

using Vec2 = std::array<double, 2>;

// dzeta_1, dzeta_2 and (when the lattice has one) dzeta_3 over a shared
// Poincare sum.  Index k = 0, 1, 2 throughout.
class StandardDifferentials {
  public:
    explicit StandardDifferentials(HarnackData S, riemann::SeriesOptions opt = {});

    const HarnackData& data() const { return S_; }
    const riemann::SchottkyGroup& group() const { return *group_; }
    int genus() const { return group_->genus(); }
    bool has_third() const { return has3_; }

    // Distinct pole positions on S^1 and the accumulated residues there.
    const std::vector<cplx>& poles() const { return poles_; }
    const std::vector<double>& pole_angles() const { return angles_; }
    const std::vector<double>& residues(int k) const { return res_[k]; }
    const riemann::DifferentialSeries& series(int k) const { return series_[k]; }

    struct Values {
        std::array<cplx, 3> f, df, d2f;
    };
    Values eval(cplx z) const;
    std::array<cplx, 3> f(cplx z) const;
    // zeta_k(z) = int_Q^z dzeta_k up to a real constant (Re zeta is the
    // base-free sum of log|z - p| terms).
    std::array<cplx, 3> zeta(cplx z) const;

    cplx base_point() const { return std::polar(1.0, tq_); }
    double base_angle() const { return tq_; }

    Vec2 amoeba(cplx z) const;
    // Translated so that the polygon's lower-left bounding corner is 0.
    Vec2 polygon(cplx z) const;
    Vec2 polygon_offset() const { return offset_; }

    // Arcs of S^1 between neighbouring clusters and their polygon corners.
    struct Arc {
        double t0, t1;
        Vec2 corner;
    };
    const std::vector<Arc>& cluster_arcs() const { return arcs_; }

    // Asymptotic tentacle direction -(res dzeta_1, res dzeta_2) at pole p.
    Vec2 tentacle(int p) const;

    // int_Q^z zeta_2 dzeta_1 along a hole-avoiding polyline.
    cplx zeta2_dzeta1(cplx z) const;
    double ronkin(cplx z) const;
    double surface_tension(cplx z) const;

  private:
    HarnackData S_;
    std::shared_ptr<riemann::SchottkyGroup> group_;
    std::shared_ptr<const riemann::PoleSums> sums_;
    std::vector<cplx> poles_;
    std::vector<double> angles_;
    std::array<std::vector<double>, 3> res_;
    std::array<riemann::DifferentialSeries, 3> series_;
    bool has3_ = false;
    double tq_ = 0.0;
    std::vector<cplx> prim_q_;
    Vec2 offset_{0.0, 0.0};
    std::vector<Arc> arcs_;
};

// Residues of (dzeta_1, dzeta_2, dzeta_3) at a marked point.
std::array<double, 3> marked_residues(const HarnackData& S, const Marked& m);

// Genus-0 surface tension as a sum of Bloch-Wigner edge terms.
double edge_surface_tension(cplx alpha, cplx beta, cplx z);
double surface_tension_genus0(const StandardDifferentials& d, cplx z);

}  // namespace dimer::harnack
