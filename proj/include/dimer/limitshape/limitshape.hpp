#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "dimer/harnack/differentials.hpp"

namespace dimer::limitshape {

using harnack::Vec2;

struct UV {
    double u = 0.0, v = 0.0;
};

enum class RegionKind { Liquid, Frozen, QuasiFrozen, Gas, Boundary, Outside };
const char* region_name(RegionKind k);

// id: arc index on S^1 (Frozen, QuasiFrozen) or oval index (Gas).
struct Region {
    RegionKind kind = RegionKind::Outside;
    int id = -1;
    cplx point{};  // free zero for Liquid
};

struct ComplexHeight {
    double g = 0.0, h = 0.0;
    cplx H() const { return {g / M_PI, h}; }
};

// Zeros of dzeta_(u,v): per oval/arc counts from sign changes of the real
// restriction, and (when requested) the interior count from the argument
// principle.
struct ZeroCensus {
    std::vector<int> arc_zeros;   // arcs of S^1 between consecutive poles
    std::vector<int> oval_zeros;  // inner circles
    int interior = -1;            // zeros in the open domain, -1 if not counted
    int expected = 0;             // 2g - 2 + number of poles
    int total() const;
};

struct ArcticCurve {
    int oval = 0;  // 0 is S^1
    std::vector<UV> points;
};

struct LimitShapeField {
    double u0, u1, v0, v1;
    int resolution = 0;
    std::vector<RegionKind> kind;
    std::vector<int> id;
    std::vector<double> height;
    std::vector<Vec2> gradient;
    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * resolution + i; }
    UV node(int i, int j) const;
};

// Ovals are indexed 0 for S^1 and j + 1 for circle j.
class LimitShape {
  public:
    explicit LimitShape(std::shared_ptr<const harnack::StandardDifferentials> d, int samples = 600);

    const harnack::StandardDifferentials& differentials() const { return *d_; }
    bool contains(double u, double v, double margin = 0.0) const;
    // Bounding box of the target domain.
    std::array<double, 4> bounds() const;

    cplx f(double u, double v, cplx z) const;
    cplx zeta(double u, double v, cplx z) const;
    double residue(double u, double v, int pole) const;

    UV ko_map(cplx P) const;
    UV arctic_point(int oval, double t) const;
    // Point on an oval, t the angle about its center.
    cplx oval_point(int oval, double t) const;

    std::optional<cplx> free_zero(double u, double v, std::optional<cplx> hint = {}) const;
    ZeroCensus census(double u, double v, bool count_interior = true) const;
    // Zeros of dzeta_(u,v) on the ovals as (oval, t) pairs.
    std::vector<std::pair<int, double>> oval_zeros(double u, double v) const;
    Region classify(double u, double v, std::optional<cplx> hint = {}) const;

    ComplexHeight complex_height(double u, double v, std::optional<double> base_angle = {}) const;
    // C^1 extension, pinned to 0 at the lower-left corner.
    double height(double u, double v) const;
    double height(double u, double v, const Region& r) const;
    Vec2 height_gradient(double u, double v, const Region& r) const;

    double burgers_residual(double u, double v, double step) const;
    double divergence(double u, double v, double step) const;

    std::vector<ArcticCurve> arctic_curves(int samples = 400) const;
    LimitShapeField extended_height_grid(int resolution) const;

    int arc_count() const { return static_cast<int>(arcs_.size()); }
    // Family of the poles bounding arc i; same-type arcs separate quasi-frozen regions.
    bool same_type_arc(int i) const { return arcs_[i].same; }
    int central_oval() const { return central_; }

  private:
    struct PoleArc {
        double t0, t1;
        bool same;
    };
    struct Samples {
        std::vector<double> t;
        std::array<std::vector<double>, 3> g;
    };
    double real_restriction(const harnack::StandardDifferentials::Values& v, int oval, double t, double u,
                            double vv) const;
    void push_components(Samples& s, const harnack::StandardDifferentials::Values& ev, int oval, double t) const;
    int sign_changes(const Samples& s, int oval, bool closed, double u, double v) const;
    ZeroCensus dense_census(double u, double v, int factor) const;
    int interior_count(double u, double v) const;
    Region region_from_census(const ZeroCensus& c, double u, double v) const;
    cplx region_point(const Region& r) const;
    std::optional<cplx> newton(double u, double v, cplx z0, double margin) const;
    Samples sample_oval(int oval, int m) const;
    Samples sample_arc(int arc, int m) const;
    UV pole_limit(int pole) const;

    std::shared_ptr<const harnack::StandardDifferentials> d_;
    std::vector<PoleArc> arcs_;
    std::vector<Samples> arc_samples_, oval_samples_;
    int fixed_ = 0;
    int central_ = -1;
    double pin_ = 0.0;
    int samples_;
};

nlohmann::json to_json(const std::vector<ArcticCurve>& curves);
nlohmann::json to_json(const LimitShapeField& field);

}  // namespace dimer::limitshape
