#include "dimer/riemann/series.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dimer::riemann {

namespace {

// Log(1 - x) for |x| < 1, principal branch.
inline cplx log1m(cplx x) { return std::log(1.0 - x); }

// 1 / d without the inf/nan handling of complex division (d is never 0 or
// huge here).
inline cplx recip(cplx d) {
    double n = d.real() * d.real() + d.imag() * d.imag();
    return {d.real() / n, -d.imag() / n};
}

}  // namespace

namespace {

double element_bound(const SchottkyGroup& group, const Disk& D, int np) {
    const double inf = std::numeric_limits<double>::infinity();
    double rho = D.radius;
    if (D.inner) {
        double d = group.distance_to_domain(D.center);
        return d > rho ? np * rho / ((d - rho) * d) : inf;
    }
    double far = std::abs(D.center) + 1.0;
    return rho > far ? np / (rho - far) : inf;
}

// Ratio of consecutive shell bounds on short words; used to bound the
// remainder of a pruned subtree by a geometric series.
double shell_ratio(const SchottkyGroup& group) {
    const int g = group.genus();
    const int top = g == 1 ? 4 : 3;
    std::vector<double> sums(top + 1, 0.0);
    for (int len = 1; len <= top; ++len)
        for (const auto& e : group.shell(len)) sums[len] += element_bound(group, e.container, 1);
    double k = 0.0;
    for (int len = 2; len <= top; ++len) k = std::max(k, sums[len] / sums[len - 1]);
    return k;
}

}  // namespace

PoleSums::PoleSums(const SchottkyGroup& group, std::vector<cplx> base, std::vector<unsigned char> infinite,
                   int skip_generator, SeriesOptions opt)
    : group_(&group), base_(std::move(base)), base_inf_(std::move(infinite)) {
    if (base_inf_.empty()) base_inf_.assign(base_.size(), 0);
    const int np = size();
    const int g = group.genus();

    auto push_identity = [&] {
        blocks_.clear();
        w_.clear();
        winf_.clear();
        blocks_.push_back({0.0, false, true});
        for (int p = 0; p < np; ++p) {
            w_.push_back(base_[p]);
            winf_.push_back(base_inf_[p]);
        }
    };
    push_identity();
    if (g == 0) return;

    const double kappa = shell_ratio(group);
    if (!(kappa < 0.9)) {
        std::ostringstream os;
        os << "Poincare series shell ratio " << kappa << " too close to 1";
        throw Error(ErrorCode::NonConvergent, os.str());
    }
    const double tail = 1.0 / (1.0 - kappa);

    // Depth-first over reduced words.  A subtree is dropped once its root
    // bound times the geometric tail is under tau; the dropped mass must add
    // up to less than eps, otherwise tau shrinks and the walk restarts.
    struct Node {
        Mobius m;
        Disk container;
        int length;
        int last;
    };
    double tau = opt.eps * 1e-2;
    for (int attempt = 0;; ++attempt) {
        push_identity();
        double dropped = 0.0;
        int depth = 0;
        bool capped = false;
        std::vector<Node> stack;
        for (int l = 2 * g - 1; l >= 0; --l) stack.push_back({group.letter(l), group.target_disk(l), 1, l});
        while (!stack.empty()) {
            Node e = stack.back();
            stack.pop_back();
            double b = element_bound(group, e.container, np);
            if (b * tail < tau) {
                dropped += b * tail;
                continue;
            }
            if (e.length > opt.cap) {
                capped = true;
                dropped += b * tail;
                continue;
            }
            depth = std::max(depth, e.length);
            if (!(skip_generator >= 0 && (e.last == skip_generator || e.last == skip_generator + g))) {
                blocks_.push_back({e.container.center, e.container.inner, false});
                for (int p = 0; p < np; ++p) {
                    if (base_inf_[p]) {
                        bool fin;
                        cplx w = e.m.at_infinity(fin);
                        w_.push_back(w);
                        winf_.push_back(!fin);
                    } else {
                        cplx den = e.m.c * base_[p] + e.m.d;
                        if (std::abs(den) < 1e-300) {
                            w_.push_back(0.0);
                            winf_.push_back(1);
                        } else {
                            w_.push_back((e.m.a * base_[p] + e.m.b) / den);
                            winf_.push_back(0);
                        }
                    }
                }
            }
            for (int l = 2 * g - 1; l >= 0; --l) {
                if (l == group.inverse_letter(e.last)) continue;
                // Generators are unimodular; renormalizing would amplify rounding.
                stack.push_back({e.m * group.letter(l), image(e.m, group.target_disk(l), 1.0), e.length + 1, l});
            }
        }
        length_ = depth;
        bound_ = dropped;
        if (dropped < opt.eps) break;
        if (capped || attempt >= 6) {
            std::ostringstream os;
            os << "Poincare series remainder " << dropped << " above " << opt.eps << " at cap " << opt.cap;
            throw Error(ErrorCode::NonConvergent, os.str());
        }
        tau *= 0.1;
    }
}

void PoleSums::eval(cplx z, cplx* s, cplx* ds, cplx* d2s) const {
    const int np = size();
    for (int p = 0; p < np; ++p) {
        s[p] = 0.0;
        if (ds) ds[p] = 0.0;
        if (d2s) d2s[p] = 0.0;
    }
    std::size_t idx = 0;
    for (const auto& b : blocks_) {
        cplx ic = 0.0;
        if (b.subtract) ic = recip(z - b.center);
        for (int p = 0; p < np; ++p, ++idx) {
            if (winf_[idx]) continue;
            cplx iv = recip(z - w_[idx]);
            s[p] += iv - ic;
            if (ds) ds[p] += ic * ic - iv * iv;
            if (d2s) d2s[p] += 2.0 * (iv * iv * iv - ic * ic * ic);
        }
    }
}

void PoleSums::primitive(cplx z, cplx* F, bool include_identity) const {
    const int np = size();
    for (int p = 0; p < np; ++p) F[p] = 0.0;
    std::size_t idx = 0;
    for (const auto& b : blocks_) {
        if (b.identity) {
            if (include_identity)
                for (int p = 0; p < np; ++p)
                    if (!winf_[idx + p]) F[p] += log1m(z / w_[idx + p]);
            idx += np;
            continue;
        }
        if (b.subtract) {
            cplx zc = z - b.center;
            for (int p = 0; p < np; ++p, ++idx)
                if (!winf_[idx]) F[p] += log1m((w_[idx] - b.center) / zc);
        } else {
            for (int p = 0; p < np; ++p, ++idx)
                if (!winf_[idx]) F[p] += log1m((z - b.center) / (w_[idx] - b.center));
        }
    }
}

DifferentialSeries::DifferentialSeries(std::shared_ptr<const PoleSums> sums, std::vector<cplx> residues)
    : sums_(std::move(sums)), res_(std::move(residues)) {
    if (!sums_ || static_cast<int>(res_.size()) != sums_->size())
        throw Error(ErrorCode::InvalidArgument, "residue vector does not match pole set");
}

DifferentialSeries DifferentialSeries::third_kind(const SchottkyGroup& group, const std::vector<Pole>& poles,
                                                  SeriesOptions opt) {
    std::vector<cplx> base;
    std::vector<cplx> res;
    double total = 0.0;
    for (const auto& p : poles) {
        if (std::abs(std::abs(p.point) - 1.0) > 1e-12)
            throw Error(ErrorCode::InvalidArgument, "third-kind poles must lie on the unit circle");
        base.push_back(p.point);
        res.push_back(p.residue);
        total += p.residue;
    }
    if (std::abs(total) > 1e-12) throw Error(ErrorCode::InvalidArgument, "residues must sum to zero");
    auto sums = std::make_shared<PoleSums>(group, base, std::vector<unsigned char>{}, -1, opt);
    return DifferentialSeries(sums, res);
}

cplx DifferentialSeries::value(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> s(np);
    sums_->eval(z, s.data(), nullptr, nullptr);
    cplx f = 0.0;
    for (int p = 0; p < np; ++p) f += res_[p] * s[p];
    return f;
}

SeriesValue DifferentialSeries::eval(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> s(3 * np);
    sums_->eval(z, s.data(), s.data() + np, s.data() + 2 * np);
    SeriesValue v{0.0, 0.0, 0.0};
    for (int p = 0; p < np; ++p) {
        v.f += res_[p] * s[p];
        v.df += res_[p] * s[np + p];
        v.d2f += res_[p] * s[2 * np + p];
    }
    return v;
}

double DifferentialSeries::on_circle(double t) const {
    cplx z = std::polar(1.0, t);
    return std::real(value(z) * cplx(0.0, 1.0) * z);
}

cplx DifferentialSeries::primitive(cplx z) const {
    const int np = sums_->size();
    std::vector<cplx> F(np);
    sums_->primitive(z, F.data(), true);
    cplx out = 0.0;
    for (int p = 0; p < np; ++p) out += res_[p] * F[p];
    return out;
}

std::vector<Pole> DifferentialSeries::poles() const {
    std::vector<Pole> out;
    for (int p = 0; p < sums_->size(); ++p) out.push_back({sums_->base()[p], res_[p].real()});
    return out;
}

DifferentialSeries DifferentialSeries::operator+(const DifferentialSeries& o) const {
    if (sums_ != o.sums_) throw Error(ErrorCode::InvalidArgument, "differentials over different pole sets");
    std::vector<cplx> r(res_);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.res_[i];
    return DifferentialSeries(sums_, r);
}

DifferentialSeries DifferentialSeries::operator*(double c) const {
    std::vector<cplx> r(res_);
    for (auto& x : r) x *= c;
    return DifferentialSeries(sums_, r);
}

}  // namespace dimer::riemann
