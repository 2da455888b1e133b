#include "dimer/riemann/surface.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace dimer::riemann {

namespace {

using GL = boost::math::quadrature::gauss<double, 30>;
const cplx I(0.0, 1.0);
const double TWO_PI = 2.0 * M_PI;

cplx log1m(cplx x) { return std::log(1.0 - x); }

// log(z1 - p) - log(z0 - p) continued along the segment z0 -> z1.
cplx track_log(cplx p, cplx z0, cplx z1, int depth = 0) {
    cplx a = z0 - p, b = z1 - p;
    if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14) throw Error(ErrorCode::PoleOnPath, "path through pole");
    cplx r = std::log(b / a);
    if (std::abs(r.imag()) < 0.5 || depth > 40) return r;
    cplx m = 0.5 * (z0 + z1);
    return track_log(p, z0, m, depth + 1) + track_log(p, m, z1, depth + 1);
}

}  // namespace

cplx integrate_polyline(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts, double max_piece) {
    cplx total = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        cplx a = pts[s], b = pts[s + 1];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        int pieces = std::max(1, static_cast<int>(std::ceil(len / max_piece)));
        for (int k = 0; k < pieces; ++k) {
            cplx p0 = a + (b - a) * (double(k) / pieces);
            cplx p1 = a + (b - a) * (double(k + 1) / pieces);
            total += GL::integrate([&](double s) { return f(p0 + (p1 - p0) * s) * (p1 - p0); }, 0.0, 1.0);
        }
    }
    return total;
}

cplx integrate_circle(const std::function<cplx(cplx)>& f, cplx center, double radius, int nodes) {
    // Trapezoid rule is spectrally accurate for periodic analytic integrands.
    cplx total = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double t = TWO_PI * k / nodes;
        cplx e = std::polar(1.0, t);
        total += f(center + radius * e) * I * radius * e;
    }
    return total * (TWO_PI / nodes);
}

Surface::Surface(SchottkyGroup group, double base_angle, SeriesOptions opt)
    : group_(std::move(group)), opt_(opt) {
    tq_ = std::fmod(base_angle, TWO_PI);
    if (tq_ < 0) tq_ += TWO_PI;
    const int g = genus();
    const cplx c = 1.0 / (TWO_PI * I);
    fa_.resize(g);
    fb_.resize(g);
    fb_finite_.resize(g);
    for (int k = 0; k < g; ++k) {
        bool bf;
        group_.fixed_points(k, fa_[k], fb_[k], bf);
        fb_finite_[k] = bf;
        auto sums = std::make_shared<PoleSums>(group_, std::vector<cplx>{fa_[k], fb_[k]},
                                               std::vector<unsigned char>{0, static_cast<unsigned char>(!bf)}, k,
                                               opt_);
        omegas_.emplace_back(sums, std::vector<cplx>{-c, c});
    }
    abel_q_ = VecR::Zero(g);
    if (g == 0) return;
    abel_q_ = abel_circle(tq_);
    B_ = compute_b_periods();
    MatC Bs = 0.5 * (B_ + B_.transpose());
    Bs = MatC(Bs.imag().cast<cplx>() * I);
    theta_ = Theta(Bs, 1e-13);
    choose_characteristic();
}

double Surface::wrap(double t) const {
    double x = std::fmod(t - tq_, TWO_PI);
    if (x < 0) x += TWO_PI;
    return tq_ + x;
}

VecC Surface::omega(cplx z) const {
    VecC out(genus());
    for (int k = 0; k < genus(); ++k) out(k) = omegas_[k].value(z);
    return out;
}

VecR Surface::omega_circle(double t) const {
    cplx z = std::polar(1.0, t);
    VecR out(genus());
    for (int k = 0; k < genus(); ++k) out(k) = std::real(omegas_[k].value(z) * I * z);
    return out;
}

VecR Surface::abel_circle(double t) const {
    const int g = genus();
    VecR out(g);
    if (g == 0) return out;
    t = wrap(t);
    cplx z = std::polar(1.0, t);
    const cplx c = 1.0 / (TWO_PI * I);
    cplx F[2];
    for (int k = 0; k < g; ++k) {
        cplx la = I * t + log1m(fa_[k] * std::conj(z));
        cplx lb = fb_finite_[k] ? log1m(z / fb_[k]) : cplx(0.0);
        omegas_[k].sums()->primitive(z, F, false);
        cplx v = c * (lb - la) + c * (F[1] - F[0]);
        out(k) = v.real() - (abel_q_.size() == g ? abel_q_(k) : 0.0);
    }
    return out;
}

VecC Surface::abel(cplx z) const {
    const int g = genus();
    VecC out(g);
    if (g == 0) return out;
    double theta = std::abs(z) > 1e-300 ? wrap(std::arg(z)) : tq_;
    cplx zc = std::polar(1.0, theta);
    VecR base = abel_circle(theta);
    const cplx c = 1.0 / (TWO_PI * I);
    cplx F0[2], F1[2];
    for (int k = 0; k < g; ++k) {
        cplx dla = track_log(fa_[k], zc, z);
        cplx dlb = fb_finite_[k] ? track_log(fb_[k], zc, z) : cplx(0.0);
        omegas_[k].sums()->primitive(zc, F0, false);
        omegas_[k].sums()->primitive(z, F1, false);
        out(k) = base(k) + c * (dlb - dla) + c * ((F1[1] - F1[0]) - (F0[1] - F0[0]));
    }
    return out;
}

VecC Surface::abel_quadrature(cplx z) const {
    const int g = genus();
    VecC out = VecC::Zero(g);
    double theta = std::abs(z) > 1e-300 ? wrap(std::arg(z)) : tq_;
    for (int k = 0; k < g; ++k) {
        int pieces = std::max(1, static_cast<int>(std::ceil((theta - tq_) / 0.05)));
        cplx arc = 0.0;
        for (int p = 0; p < pieces; ++p) {
            double t0 = tq_ + (theta - tq_) * p / pieces, t1 = tq_ + (theta - tq_) * (p + 1) / pieces;
            arc += GL::integrate(
                [&](double t) {
                    cplx e = std::polar(1.0, t);
                    return omegas_[k].value(e) * I * e;
                },
                t0, t1);
        }
        cplx rad = integrate_polyline([&](cplx w) { return omegas_[k].value(w); },
                                      {std::polar(1.0, theta), z});
        out(k) = arc + rad;
    }
    return out;
}

MatC Surface::a_periods() const {
    const int g = genus();
    MatC P(g, g);
    const auto& cs = group_.circles();
    for (int j = 0; j < g; ++j) {
        double gap = 1.0 - std::abs(cs[j].center) - cs[j].radius;
        for (int i = 0; i < g; ++i)
            if (i != j) gap = std::min(gap, std::abs(cs[i].center - cs[j].center) - cs[i].radius - cs[j].radius);
        double rad = cs[j].radius + 0.5 * gap;
        for (int k = 0; k < g; ++k)
            P(j, k) = -integrate_circle([&](cplx w) { return omegas_[k].value(w); }, cs[j].center, rad);
    }
    return P;
}

MatC Surface::compute_b_periods() const {
    const int g = genus();
    MatC B(g, g);
    const auto& cs = group_.circles();
    for (int j = 0; j < g; ++j) {
        // Point on C_j whose radial segment to S^1 misses the other holes.
        cplx p, q;
        bool found = false;
        for (int trial = 0; trial < 64 && !found; ++trial) {
            double dir = (std::abs(cs[j].center) > 1e-12 ? std::arg(cs[j].center) : 0.0) +
                         (trial % 2 ? 1 : -1) * 0.05 * ((trial + 1) / 2);
            p = cs[j].center + cs[j].radius * std::polar(1.0, dir);
            if (std::abs(p) < 1e-9) continue;
            q = p / std::abs(p);
            found = true;
            for (int i = 0; i < g && found; ++i) {
                if (i == j) continue;
                // Distance from center i to segment p-q.
                cplx d = q - p;
                double s = std::clamp(std::real((cs[i].center - p) * std::conj(d)) / std::norm(d), 0.0, 1.0);
                if (std::abs(p + s * d - cs[i].center) < cs[i].radius * 1.05) found = false;
            }
        }
        if (!found) throw Error(ErrorCode::NonConvergent, "no clear b-path for circle");
        for (int k = 0; k < g; ++k) {
            cplx v = integrate_polyline([&](cplx w) { return omegas_[k].value(w); }, {q, p});
            B(j, k) = cplx(0.0, -2.0 * v.imag());
        }
    }
    return B;
}

void Surface::choose_characteristic() {
    const int g = genus();
    struct Cand {
        Characteristic ch;
        VecR grad;
        double sign, quality;
    };
    std::vector<Cand> good;
    const int samples = 360;
    std::vector<VecR> om(samples);
    for (int s = 0; s < samples; ++s) om[s] = omega_circle(tq_ + TWO_PI * s / samples);
    for (const auto& ch : characteristics(g, true)) {
        VecC grad;
        theta_.value_grad(VecC::Zero(g), &ch, grad);
        VecR gr = grad.real();
        double lo = 1e300, hi = 0.0;
        int pos = 0, neg = 0;
        for (int s = 0; s < samples; ++s) {
            double h2 = gr.dot(om[s]);
            lo = std::min(lo, std::abs(h2));
            hi = std::max(hi, std::abs(h2));
            (h2 > 0 ? pos : neg)++;
        }
        if (hi <= 0.0 || (pos > 0 && neg > 0)) continue;
        good.push_back({ch, gr, pos > 0 ? 1.0 : -1.0, lo / hi});
    }
    std::stable_sort(good.begin(), good.end(), [](const Cand& a, const Cand& b) { return a.quality > b.quality; });
    if (good.empty() || good.front().quality < 1e-6)
        throw Error(ErrorCode::NoOddCharacteristic, "no odd characteristic with a nonvanishing spinor on S^1");
    for (const auto& c : good) {
        if (c.quality < 1e-6) break;
        usable_.push_back(c.ch);
        usable_grad_.push_back(c.grad);
        usable_sign_.push_back(c.sign);
    }
    ch_ = usable_.front();
    grad0_ = usable_grad_.front();
    sign_ = usable_sign_.front();
}

double Surface::prime_form(double a, double b) const {
    if (genus() == 0) return 2.0 * std::sin(0.5 * (wrap(b) - wrap(a)));
    return prime_form(a, b, ch_);
}

double Surface::prime_form(double a, double b, const Characteristic& ch) const {
    if (genus() == 0) return 2.0 * std::sin(0.5 * (wrap(b) - wrap(a)));
    std::size_t idx = 0;
    while (idx < usable_.size() && !(usable_[idx].d1 == ch.d1 && usable_[idx].d2 == ch.d2)) ++idx;
    if (idx == usable_.size())
        throw Error(ErrorCode::NoOddCharacteristic, "characteristic not usable for the prime form");
    const VecR& gr = usable_grad_[idx];
    double s = usable_sign_[idx];
    VecR w = abel_circle(b) - abel_circle(a);
    double th = theta_.value(w.cast<cplx>(), &ch).real();
    double ha = std::sqrt(std::abs(gr.dot(omega_circle(a))));
    double hb = std::sqrt(std::abs(gr.dot(omega_circle(b))));
    return th / (s * ha * hb);
}

}  // namespace dimer::riemann
