#include "dimer/harnack/data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dimer::harnack {

using nlohmann::json;

namespace {

constexpr double TWO_PI = 2.0 * M_PI;

const char* family_name(Family f) {
    switch (f) {
        case Family::Alpha: return "alpha";
        case Family::Beta: return "beta";
        case Family::Gamma: return "gamma";
    }
    return "?";
}

std::string group_key(Family f, int sign) {
    std::string s = family_name(f);
    if (sign < 0) s += "_minus";
    if (sign > 0) s += "_plus";
    return s;
}

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

std::vector<double> read_angles(const json& a, const std::string& key, int n) {
    if (!a.contains(key)) schema("missing angles." + key);
    const auto& v = a.at(key);
    if (!v.is_array()) schema("angles." + key + " must be an array");
    if (static_cast<int>(v.size()) != n) {
        std::ostringstream os;
        os << "angles." << key << " has " << v.size() << " entries, expected n = " << n;
        schema(os.str());
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) schema("angles." + key + " entries must be numbers");
        double t = x.get<double>();
        if (!std::isfinite(t)) schema("angles." + key + " entries must be finite");
        out.push_back(wrap_angle(t));
    }
    return out;
}

// Counterclockwise order test for one representative per group.
bool cyclic_ok(const std::vector<double>& th) {
    double prev = 0.0;
    for (std::size_t k = 1; k < th.size(); ++k) {
        double d = wrap_angle(th[k] - th[0]);
        if (d <= prev || d == 0.0) return false;
        prev = d;
    }
    return true;
}

}  // namespace

double wrap_angle(double t) {
    double r = std::fmod(t, TWO_PI);
    if (r < 0) r += TWO_PI;
    if (r >= TWO_PI) r -= TWO_PI;
    return r;
}

std::vector<double> HarnackData::angles(Family f, int sign) const {
    std::vector<std::pair<int, double>> tmp;
    for (const auto& m : points)
        if (m.family == f && m.sign == sign) tmp.push_back({m.index, m.angle});
    std::sort(tmp.begin(), tmp.end());
    std::vector<double> out;
    for (auto& p : tmp) out.push_back(p.second);
    return out;
}

std::string HarnackData::describe(const Marked& m) const {
    std::ostringstream os;
    os << group_key(m.family, m.sign) << "[" << m.index << "]=" << m.angle;
    return os.str();
}

std::vector<std::pair<Family, int>> cluster_order(const HarnackData& S) {
    if (S.lattice == Lattice::Square)
        return {{Family::Alpha, 1}, {Family::Beta, 1}, {Family::Alpha, -1}, {Family::Beta, -1}};
    if (S.cover == Cover::None) return {{Family::Alpha, 0}, {Family::Beta, 0}, {Family::Gamma, 0}};
    return {{Family::Alpha, -1}, {Family::Beta, -1}, {Family::Gamma, -1},
            {Family::Alpha, 1},  {Family::Beta, 1},  {Family::Gamma, 1}};
}

void check_clustering(const HarnackData& S) {
    auto order = cluster_order(S);
    const int m = static_cast<int>(order.size());
    std::vector<std::vector<const Marked*>> groups(m);
    for (const auto& p : S.points) {
        auto it = std::find(order.begin(), order.end(), std::make_pair(p.family, p.sign));
        if (it == order.end()) schema("marked point " + S.describe(p) + " does not belong to this lattice");
        groups[it - order.begin()].push_back(&p);
    }
    for (int k = 0; k < m; ++k)
        if (groups[k].empty()) schema("no " + group_key(order[k].first, order[k].second) + " angles");

    // Every choice of one point per group must sit in the prescribed cyclic
    // order; search for a witness of the first failure.
    std::vector<std::size_t> idx(m, 0);
    std::vector<double> th(m);
    long budget = 2000000;
    while (budget-- > 0) {
        for (int k = 0; k < m; ++k) th[k] = groups[k][idx[k]]->angle;
        if (!cyclic_ok(th)) {
            std::ostringstream os;
            os << "clustering violated by (";
            for (int k = 0; k < m; ++k) os << (k ? ", " : "") << S.describe(*groups[k][idx[k]]);
            os << ")";
            throw Error(ErrorCode::ClusteringViolation, os.str());
        }
        int k = 0;
        while (k < m && ++idx[k] == groups[k].size()) idx[k++] = 0;
        if (k == m) return;
    }
    // Too many tuples: fall back to the run structure of the sorted labels.
    std::vector<std::pair<double, int>> lab;
    for (int k = 0; k < m; ++k)
        for (auto* p : groups[k]) lab.push_back({p->angle, k});
    std::sort(lab.begin(), lab.end());
    std::vector<int> runs;
    for (std::size_t i = 0; i < lab.size(); ++i) {
        if (i > 0 && lab[i].first == lab[i - 1].first && lab[i].second != lab[i - 1].second)
            throw Error(ErrorCode::ClusteringViolation, "coincident angles in different groups");
        if (runs.empty() || runs.back() != lab[i].second) runs.push_back(lab[i].second);
    }
    if (runs.size() > 1 && runs.front() == runs.back()) runs.pop_back();
    bool ok = static_cast<int>(runs.size()) == m;
    for (int k = 0; ok && k < m; ++k) ok = runs[k] == (runs[0] + k) % m;
    if (!ok) throw Error(ErrorCode::ClusteringViolation, "marked points are not clustered in cyclic order");
}

void check_cover(const HarnackData& S) {
    if (!S.on_cover()) return;
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::CoverSymmetryViolation, msg); };
    for (const auto& p : S.points) {
        if (p.sign != -1) continue;
        bool found = false;
        for (const auto& q : S.points)
            if (q.sign == 1 && q.family == p.family && q.index == p.index)
                found = std::abs(std::remainder(q.angle - p.angle - M_PI, TWO_PI)) < 1e-9;
        if (!found) fail("angle " + S.describe(p) + " has no antipodal partner");
    }
    int centered = 0;
    for (std::size_t i = 0; i < S.circles.size(); ++i) {
        const auto& c = S.circles[i];
        if (std::abs(c.center) < 1e-12) {
            ++centered;
            continue;
        }
        bool found = false;
        for (const auto& d : S.circles)
            if (std::abs(d.center + c.center) < 1e-9 && std::abs(d.radius - c.radius) < 1e-9) found = true;
        if (!found) {
            std::ostringstream os;
            os << "circle " << i << " has no mirror image under z -> -z";
            fail(os.str());
        }
    }
    if (S.cover == Cover::Ramified && centered > 0) fail("ramified cover: the branch point 0 must lie in the domain");
    if (S.cover == Cover::Unramified) {
        if (centered != 1) fail("unramified cover needs exactly one circle centered at 0");
        if (S.central < 0 || std::abs(S.circles[S.central].center) > 1e-12)
            fail("unramified cover: central circle index does not point at the centered circle");
    }
}

void validate(const HarnackData& S) {
    if (S.n < 1) schema("n must be positive");
    riemann::SchottkyGroup check(S.circles);
    for (double s : S.sides)
        if (!(s > 0.0)) schema("hex_sides must be positive");
    check_clustering(S);
    check_cover(S);
}

HarnackData parse_harnack(const json& doc) {
    if (!doc.is_object()) schema("document must be a JSON object");
    HarnackData S;
    if (!doc.contains("lattice") || !doc["lattice"].is_string()) schema("missing lattice");
    std::string lat = doc["lattice"];
    if (lat == "square") S.lattice = Lattice::Square;
    else if (lat == "hexagonal") S.lattice = Lattice::Hexagonal;
    else schema("lattice must be \"square\" or \"hexagonal\"");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) schema("missing integer n");
    S.n = doc["n"];
    if (S.n < 1 || S.n > 64) schema("n must be in [1, 64]");

    if (doc.contains("circles")) {
        if (!doc["circles"].is_array()) schema("circles must be an array");
        for (const auto& c : doc["circles"]) {
            if (!c.is_object() || !c.contains("center") || !c.contains("radius")) schema("circle needs center and radius");
            const auto& ce = c["center"];
            if (!ce.is_array() || ce.size() != 2 || !ce[0].is_number() || !ce[1].is_number())
                schema("circle center must be [re, im]");
            if (!c["radius"].is_number()) schema("circle radius must be a number");
            S.circles.push_back({cplx(ce[0].get<double>(), ce[1].get<double>()), c["radius"].get<double>()});
        }
    }

    if (doc.contains("cover")) {
        const auto& cv = doc["cover"];
        std::string type = cv.is_string() ? cv.get<std::string>()
                                          : (cv.is_object() && cv.contains("type") ? cv["type"].get<std::string>() : "");
        if (type == "none") S.cover = Cover::None;
        else if (type == "ramified") S.cover = Cover::Ramified;
        else if (type == "unramified") S.cover = Cover::Unramified;
        else schema("cover.type must be none, ramified or unramified");
        if (cv.is_object() && cv.contains("central")) {
            if (!cv["central"].is_number_integer()) schema("cover.central must be an integer");
            S.central = cv["central"];
        }
    }
    if (S.lattice == Lattice::Square && S.cover != Cover::None) schema("covers apply to the hexagonal lattice only");
    if (S.cover == Cover::Unramified && S.central < 0)
        for (std::size_t i = 0; i < S.circles.size(); ++i)
            if (std::abs(S.circles[i].center) < 1e-12) S.central = static_cast<int>(i);
    if (S.central >= static_cast<int>(S.circles.size())) schema("cover.central out of range");

    if (!doc.contains("angles") || !doc["angles"].is_object()) schema("missing angles object");
    const auto& a = doc["angles"];
    auto add = [&](Family f, int sign, const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) S.points.push_back({v[i], f, sign, static_cast<int>(i)});
    };
    if (S.lattice == Lattice::Square) {
        add(Family::Alpha, -1, read_angles(a, "alpha_minus", S.n));
        add(Family::Alpha, 1, read_angles(a, "alpha_plus", S.n));
        add(Family::Beta, -1, read_angles(a, "beta_minus", S.n));
        add(Family::Beta, 1, read_angles(a, "beta_plus", S.n));
    } else {
        const Family fams[3] = {Family::Alpha, Family::Beta, Family::Gamma};
        for (Family f : fams) {
            std::string key = family_name(f);
            if (S.cover == Cover::None) {
                add(f, 0, read_angles(a, key, S.n));
            } else if (a.contains(key + "_minus")) {
                add(f, -1, read_angles(a, key + "_minus", S.n));
                add(f, 1, read_angles(a, key + "_plus", S.n));
            } else {
                auto m = read_angles(a, key, S.n);
                add(f, -1, m);
                for (auto& t : m) t = wrap_angle(t + M_PI);
                add(f, 1, m);
            }
        }
    }

    if (doc.contains("hex_sides")) {
        const auto& hs = doc["hex_sides"];
        if (!hs.is_array() || hs.size() != 3) schema("hex_sides must be [a, b, c]");
        for (int k = 0; k < 3; ++k) {
            if (!hs[k].is_number()) schema("hex_sides entries must be numbers");
            S.sides[k] = hs[k];
        }
    }
    if (doc.contains("D")) {
        if (!doc["D"].is_array()) schema("D must be an array");
        for (const auto& x : doc["D"]) {
            if (!x.is_number()) schema("D entries must be numbers");
            S.D.push_back(x);
        }
    }
    validate(S);
    return S;
}

HarnackData parse_harnack_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    try {
        return parse_harnack(doc);
    } catch (const json::exception& e) {
        schema(std::string("bad field type: ") + e.what());
    }
}

json to_json(const HarnackData& S) {
    json doc;
    doc["lattice"] = S.lattice == Lattice::Square ? "square" : "hexagonal";
    doc["n"] = S.n;
    doc["circles"] = json::array();
    for (const auto& c : S.circles)
        doc["circles"].push_back({{"center", {c.center.real(), c.center.imag()}}, {"radius", c.radius}});
    json ang = json::object();
    for (const auto& [f, s] : std::vector<std::pair<Family, int>>{
             {Family::Alpha, -1}, {Family::Alpha, 1}, {Family::Alpha, 0}, {Family::Beta, -1}, {Family::Beta, 1},
             {Family::Beta, 0}, {Family::Gamma, -1}, {Family::Gamma, 1}, {Family::Gamma, 0}}) {
        auto v = S.angles(f, s);
        if (!v.empty()) ang[group_key(f, s)] = v;
    }
    doc["angles"] = ang;
    json cv{{"type", S.cover == Cover::None ? "none" : S.cover == Cover::Ramified ? "ramified" : "unramified"}};
    if (S.cover == Cover::Unramified) cv["central"] = S.central;
    doc["cover"] = cv;
    if (S.lattice == Lattice::Hexagonal) doc["hex_sides"] = S.sides;
    doc["D"] = S.D;
    return doc;
}

HarnackData uniform_square(int n) {
    HarnackData S;
    S.n = n;
    for (int i = 0; i < n; ++i) {
        S.points.push_back({M_PI, Family::Alpha, -1, i});
        S.points.push_back({0.0, Family::Alpha, 1, i});
        S.points.push_back({1.5 * M_PI, Family::Beta, -1, i});
        S.points.push_back({0.5 * M_PI, Family::Beta, 1, i});
    }
    return S;
}

HarnackData uniform_hexagon_ramified() {
    HarnackData S;
    S.lattice = Lattice::Hexagonal;
    S.cover = Cover::Ramified;
    const Family fams[3] = {Family::Alpha, Family::Beta, Family::Gamma};
    for (int k = 0; k < 3; ++k) {
        S.points.push_back({k * M_PI / 3.0, fams[k], -1, 0});
        S.points.push_back({M_PI + k * M_PI / 3.0, fams[k], 1, 0});
    }
    return S;
}

HarnackData symmetric_hexagon_unramified(double central_radius) {
    HarnackData S = uniform_hexagon_ramified();
    S.cover = Cover::Unramified;
    S.circles.push_back({0.0, central_radius});
    S.central = 0;
    return S;
}

}  // namespace dimer::harnack
