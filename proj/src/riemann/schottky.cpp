#include "dimer/riemann/schottky.hpp"

#include <cmath>
#include <sstream>

namespace dimer {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OverlappingCircles: return "OverlappingCircles";
        case ErrorCode::CircleOutsideDisk: return "CircleOutsideDisk";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::PoleOnPath: return "PoleOnPath";
        case ErrorCode::BadPeriodMatrix: return "BadPeriodMatrix";
        case ErrorCode::NoOddCharacteristic: return "NoOddCharacteristic";
        case ErrorCode::ClusteringViolation: return "ClusteringViolation";
        case ErrorCode::CoverSymmetryViolation: return "CoverSymmetryViolation";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::WronskianUnderflow: return "WronskianUnderflow";
        case ErrorCode::ZeroCountMismatch: return "ZeroCountMismatch";
        case ErrorCode::ThetaZeroHit: return "ThetaZeroHit";
        case ErrorCode::KasteleynViolation: return "KasteleynViolation";
        case ErrorCode::InconsistentLabeling: return "InconsistentLabeling";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NotPerfectMatching: return "NotPerfectMatching";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NotLiquid: return "NotLiquid";
        case ErrorCode::NotImplemented: return "NotImplemented";
    }
    return "Unknown";
}

namespace riemann {

cplx Mobius::at_infinity(bool& finite) const {
    if (std::abs(c) < 1e-300) {
        finite = false;
        return {};
    }
    finite = true;
    return a / c;
}

namespace {

Mobius normalized(const Mobius& m) {
    cplx s = std::sqrt(m.det());
    return {m.a / s, m.b / s, m.c / s, m.d / s};
}

}  // namespace

Disk image(const Mobius& m, const Disk& disk, double absdet) {
    // Closed form: the image center is the image of the point symmetric to the
    // pole of m, the sign of den tells whether the pole lies inside.
    cplx q = m.c * disk.center + m.d;
    double den = std::norm(q) - std::norm(m.c) * disk.radius * disk.radius;
    if (std::abs(den) < 1e-14 * std::norm(q))
        throw Error(ErrorCode::NonConvergent, "degenerate disk image");
    Disk out;
    out.center = ((m.a * disk.center + m.b) * std::conj(q) - m.a * std::conj(m.c) * disk.radius * disk.radius) / den;
    out.radius = disk.radius * (absdet > 0 ? absdet : std::abs(m.det())) / std::abs(den);
    out.inner = den > 0 ? disk.inner : !disk.inner;
    return out;
}

Disk reflect_in_unit_circle(const Circle& c) {
    double den = std::norm(c.center) - c.radius * c.radius;
    Disk d;
    d.center = c.center / den;
    d.radius = c.radius / std::abs(den);
    // The reflected disk of a circle enclosing 0 is the exterior region.
    d.inner = den > 0;
    if (std::abs(den) < 1e-300) throw Error(ErrorCode::InvalidArgument, "circle through origin");
    return d;
}

SchottkyGroup::SchottkyGroup(std::vector<Circle> circles) : circles_(std::move(circles)) {
    const int g = genus();
    for (int i = 0; i < g; ++i) {
        const auto& c = circles_[i];
        if (!(c.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
        if (std::abs(c.center) + c.radius >= 1.0) {
            std::ostringstream os;
            os << "circle " << i << " not strictly inside the unit disk";
            throw Error(ErrorCode::CircleOutsideDisk, os.str());
        }
        for (int j = 0; j < i; ++j) {
            const auto& d = circles_[j];
            if (std::abs(c.center - d.center) <= c.radius + d.radius) {
                std::ostringstream os;
                os << "circles " << j << " and " << i << " overlap";
                throw Error(ErrorCode::OverlappingCircles, os.str());
            }
        }
    }
    gens_.resize(g);
    targets_.resize(2 * g);
    sources_.resize(2 * g);
    for (int k = 0; k < g; ++k) {
        const auto& c = circles_[k];
        Mobius m{1.0, -c.center, std::conj(c.center), c.radius * c.radius - std::norm(c.center)};
        gens_[k] = normalized(m);
        cplx tr = gens_[k].trace();
        if (std::abs(tr * tr - 4.0) < 1e-10)
            throw Error(ErrorCode::InvalidArgument, "generator is not loxodromic");
        Disk inner{c.center, c.radius, true};
        Disk refl = reflect_in_unit_circle(c);
        sources_[k] = inner;
        targets_[k] = refl;
        sources_[k + g] = refl;
        targets_[k + g] = inner;
    }
    shells_.push_back({Element{}});
}

Mobius SchottkyGroup::letter(int l) const {
    const int g = genus();
    return l < g ? gens_[l] : gens_[l - g].inverse();
}

const Disk& SchottkyGroup::source_disk(int l) const { return sources_[l]; }

const std::vector<Element>& SchottkyGroup::shell(int len) const {
    const int g = genus();
    if (g == 0 && len > 0) {
        static const std::vector<Element> empty;
        return empty;
    }
    while (static_cast<int>(shells_.size()) <= len) {
        const auto& prev = shells_.back();
        std::vector<Element> next;
        next.reserve(prev.size() * (prev.size() == 1 ? 2 * g : 2 * g - 1));
        for (const auto& e : prev) {
            for (int l = 0; l < 2 * g; ++l) {
                if (e.length > 0 && l == inverse_letter(e.last)) continue;
                Element x;
                // Generators are unimodular; renormalizing would amplify rounding.
                x.m = e.m * letter(l);
                x.length = e.length + 1;
                x.first = e.length == 0 ? l : e.first;
                x.last = l;
                x.container = e.length == 0 ? targets_[l] : image(e.m, targets_[l], 1.0);
                next.push_back(x);
            }
        }
        shells_.push_back(std::move(next));
    }
    return shells_[len];
}

std::vector<Element> SchottkyGroup::enumerate(int cap) const {
    if (cap < 0) throw Error(ErrorCode::InvalidArgument, "negative word-length cap");
    std::vector<Element> out;
    for (int len = 0; len <= cap; ++len) {
        const auto& s = shell(len);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

void SchottkyGroup::fixed_points(int k, cplx& a, cplx& b, bool& b_finite) const {
    const auto& c = circles_[k];
    if (std::abs(c.center) < 1e-15) {
        a = 0.0;
        b = 0.0;
        b_finite = false;
        return;
    }
    cplx qa = std::conj(c.center);
    cplx qb = c.radius * c.radius - std::norm(c.center) - 1.0;
    cplx qc = c.center;
    cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    // Numerically stable pair of roots.
    cplx q = -0.5 * (qb + (std::real(std::conj(qb) * disc) >= 0 ? disc : -disc));
    cplx r1 = q / qa, r2 = qc / q;
    if (std::abs(r1 - c.center) < std::abs(r2 - c.center)) {
        a = r1;
        b = r2;
    } else {
        a = r2;
        b = r1;
    }
    b_finite = true;
}

double SchottkyGroup::distance_to_domain(cplx c) const {
    double ac = std::abs(c);
    if (ac > 1.0) return ac - 1.0;
    for (const auto& h : circles_) {
        double d = std::abs(c - h.center);
        if (d < h.radius) return h.radius - d;
    }
    return 0.0;
}

bool SchottkyGroup::in_domain(cplx z, double margin) const {
    if (std::abs(z) > 1.0 - margin) return false;
    for (const auto& h : circles_)
        if (std::abs(z - h.center) < h.radius + margin) return false;
    return true;
}

}  // namespace riemann
}  // namespace dimer
