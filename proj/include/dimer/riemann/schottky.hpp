#pragma once

#include <cstdint>
#include <vector>

#include "dimer/error.hpp"

namespace dimer::riemann {

struct Circle {
    cplx center{0.0, 0.0};
    double radius = 0.0;
};

// 2x2 complex Mobius transformation z -> (a z + b) / (c z + d).
struct Mobius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    Mobius operator*(const Mobius& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                c * o.b + d * o.d};
    }
    Mobius inverse() const { return {d, -b, -c, a}; }
    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }
    // Image of infinity; `finite` is false when it is infinity itself.
    cplx at_infinity(bool& finite) const;
};

// Generalized closed disk on the Riemann sphere.  `inner` false means the
// complement of the open disk bounded by the circle (contains infinity).
struct Disk {
    cplx center{0.0, 0.0};
    double radius = 0.0;
    bool inner = true;

    bool contains(cplx z) const {
        double d = std::abs(z - center);
        return inner ? d <= radius : d >= radius;
    }
    Disk complement() const { return {center, radius, !inner}; }
};

// Image of a generalized disk; absdet > 0 supplies |det m| when known exactly.
Disk image(const Mobius& m, const Disk& disk, double absdet = -1.0);

// One group element as a reduced word in the letters S_1..S_g, S_1^-1..S_g^-1.
// Letter l < g is S_l, letter l >= g is S_{l-g}^{-1}.
struct Element {
    Mobius m;
    int length = 0;
    int first = -1;
    int last = -1;
    // Disk containing the image of everything outside the source disk of the
    // last letter; the whole fundamental half lies outside of it.
    Disk container;
};

class SchottkyGroup {
  public:
    SchottkyGroup() = default;
    explicit SchottkyGroup(std::vector<Circle> circles);

    int genus() const { return static_cast<int>(circles_.size()); }
    const std::vector<Circle>& circles() const { return circles_; }
    const Mobius& generator(int k) const { return gens_[k]; }
    Mobius letter(int l) const;
    int inverse_letter(int l) const { return (l + genus()) % (2 * genus()); }
    // Disk that the letter maps the outside of its source disk into.
    const Disk& target_disk(int l) const { return targets_[l]; }
    const Disk& source_disk(int l) const;

    // Reduced words of exactly `len` letters, identity for len == 0.
    // Shells are cached; the first call for a given length builds it.
    const std::vector<Element>& shell(int len) const;
    // Words of length <= cap, nondecreasing in length, identity first.
    std::vector<Element> enumerate(int cap) const;

    // Attracting / repelling fixed points of S_k (inside C_k and sigma_0 C_k).
    // `b_finite` is false when the second point is infinity.
    void fixed_points(int k, cplx& a, cplx& b, bool& b_finite) const;

    // Lower bound of |z - c| over the closed fundamental half (disk minus holes).
    double distance_to_domain(cplx c) const;
    // True when z lies in the closed unit disk and outside every open hole.
    bool in_domain(cplx z, double margin = 0.0) const;

  private:
    std::vector<Circle> circles_;
    std::vector<Mobius> gens_;
    std::vector<Disk> targets_;
    std::vector<Disk> sources_;
    mutable std::vector<std::vector<Element>> shells_;
};

// Reflection of a circle in the unit circle.
Disk reflect_in_unit_circle(const Circle& c);

}  // namespace dimer::riemann
