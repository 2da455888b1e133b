#pragma once

#include <memory>
#include <vector>

#include "dimer/riemann/schottky.hpp"

namespace dimer::riemann {

struct SeriesOptions {
    double eps = 1e-10;
    int cap = 12;
};

struct Pole {
    cplx point;
    double residue = 0.0;
};

// Poincare sums over the group orbit of a fixed list of base points,
// one sum per base point:  s_p(z) = sum_sigma [1/(z - sigma p) - 1/(z - c_sigma)]
// where c_sigma is the container center (dropped for the identity and for
// containers around infinity).  Any differential whose residues on the base
// points add up to zero is a dot product with these sums; the subtracted
// terms cancel there.
class PoleSums {
  public:
    // skip_generator >= 0 restricts to words not ending in S_k^{+-1}.
    // Base points flagged infinite contribute nothing.
    PoleSums(const SchottkyGroup& group, std::vector<cplx> base, std::vector<unsigned char> infinite,
             int skip_generator, SeriesOptions opt);

    int size() const { return static_cast<int>(base_.size()); }
    const std::vector<cplx>& base() const { return base_; }
    const SchottkyGroup& group() const { return *group_; }

    // s, ds, d2s have size() entries; ds/d2s may be null.
    void eval(cplx z, cplx* s, cplx* ds, cplx* d2s) const;
    // Per-base primitive of s_p, identity excluded unless base points are on S^1.
    void primitive(cplx z, cplx* F, bool include_identity) const;

    int achieved_length() const { return length_; }
    double achieved_bound() const { return bound_; }
    int element_count() const { return static_cast<int>(blocks_.size()); }

  private:
    struct Block {
        cplx center;
        bool subtract = false;   // interior container: subtract log(z - c)
        bool identity = false;
    };

    const SchottkyGroup* group_;
    std::vector<cplx> base_;
    std::vector<unsigned char> base_inf_;
    std::vector<Block> blocks_;
    std::vector<cplx> w_;             // blocks_.size() * size() images
    std::vector<unsigned char> winf_;
    int length_ = 0;
    double bound_ = 0.0;
};

struct SeriesValue {
    cplx f, df, d2f;
};

// Meromorphic differential f(z) dz: residue vector over a shared PoleSums.
class DifferentialSeries {
  public:
    DifferentialSeries() = default;
    DifferentialSeries(std::shared_ptr<const PoleSums> sums, std::vector<cplx> residues);

    static DifferentialSeries third_kind(const SchottkyGroup& group, const std::vector<Pole>& poles,
                                         SeriesOptions opt = {});

    cplx operator()(cplx z) const { return value(z); }
    cplx value(cplx z) const;
    SeriesValue eval(cplx z) const;
    // f(e^{it}) * i e^{it}; real up to rounding for third-kind differentials.
    double on_circle(double t) const;
    // Single-valued primitive on the closed fundamental half (third kind with
    // poles on S^1).  Differences are the abelian integrals.
    cplx primitive(cplx z) const;
    cplx integral(cplx z, cplx z0) const { return primitive(z) - primitive(z0); }

    const std::shared_ptr<const PoleSums>& sums() const { return sums_; }
    const std::vector<cplx>& residues() const { return res_; }
    std::vector<Pole> poles() const;

    DifferentialSeries operator+(const DifferentialSeries& o) const;
    DifferentialSeries operator*(double c) const;

  private:
    std::shared_ptr<const PoleSums> sums_;
    std::vector<cplx> res_;
};

}  // namespace dimer::riemann
