#include "dimer/lattice/container.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dimer::lattice {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'R', 'W'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
    std::string out;
    template <class T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out.append(buf, sizeof(T));
    }
    template <class T>
    void array(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }
};

struct Reader {
    const std::string& in;
    std::size_t at = 0;
    template <class T>
    T get() {
        if (at + sizeof(T) > in.size()) throw Error(ErrorCode::SchemaError, "DMRW: truncated file");
        T v;
        std::memcpy(&v, in.data() + at, sizeof(T));
        at += sizeof(T);
        return v;
    }
    template <class T>
    std::vector<T> array() {
        auto n = get<std::uint64_t>();
        if (n > (in.size() - at) / sizeof(T)) throw Error(ErrorCode::SchemaError, "DMRW: truncated array");
        std::vector<T> v(n);
        std::memcpy(v.data(), in.data() + at, n * sizeof(T));
        at += n * sizeof(T);
        return v;
    }
};

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Container to_container(const WeightedGraph& wg) {
    const DimerGraph& g = wg.graph;
    Container c;
    c.region = g.region;
    c.N = g.N;
    c.n = g.n;
    c.genus = wg.genus;
    c.vertices = static_cast<int>(g.vertices.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        c.edge_w.push_back(g.edges[e].w);
        c.edge_b.push_back(g.edges[e].b);
        c.log_abs_K.push_back(wg.log_abs_K[e]);
        c.phase.push_back(std::arg(wg.K[e]));
    }
    c.face_offset.push_back(0);
    for (int f = 0; f < g.bounded; ++f) {
        for (int e : g.faces[f].edges) c.face_edges.push_back(e);
        c.face_offset.push_back(static_cast<std::uint32_t>(c.face_edges.size()));
        c.log_abs_W.push_back(wg.log_face_weight[f]);
        c.sign_W.push_back(wg.face_weight[f] >= 0 ? 1 : -1);
    }
    return c;
}

std::string encode(const Container& c) {
    Writer w;
    w.out.append(kMagic, 4);
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint32_t>(c.region == RegionType::Aztec ? 0 : 1);
    w.put<std::int32_t>(c.N);
    w.put<std::int32_t>(c.n);
    w.put<std::int32_t>(c.genus);
    w.put<std::int32_t>(c.vertices);
    w.array(c.edge_w);
    w.array(c.edge_b);
    w.array(c.log_abs_K);
    w.array(c.phase);
    w.array(c.face_offset);
    w.array(c.face_edges);
    w.array(c.log_abs_W);
    w.array(c.sign_W);
    return w.out;
}

Container decode(const std::string& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw Error(ErrorCode::SchemaError, "DMRW: bad magic");
    Reader r{bytes, 4};
    if (r.get<std::uint32_t>() != kVersion) throw Error(ErrorCode::SchemaError, "DMRW: unsupported version");
    Container c;
    c.region = r.get<std::uint32_t>() == 0 ? RegionType::Aztec : RegionType::Hexagon;
    c.N = r.get<std::int32_t>();
    c.n = r.get<std::int32_t>();
    c.genus = r.get<std::int32_t>();
    c.vertices = r.get<std::int32_t>();
    c.edge_w = r.array<std::int32_t>();
    c.edge_b = r.array<std::int32_t>();
    c.log_abs_K = r.array<double>();
    c.phase = r.array<double>();
    c.face_offset = r.array<std::uint32_t>();
    c.face_edges = r.array<std::int32_t>();
    c.log_abs_W = r.array<double>();
    c.sign_W = r.array<std::int8_t>();
    if (r.at != bytes.size()) throw Error(ErrorCode::SchemaError, "DMRW: trailing bytes");
    return c;
}

void write_container(const std::string& path, const WeightedGraph& wg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    std::string s = encode(to_container(wg));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

Container read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode(ss.str());
}

nlohmann::json sidecar(const WeightedGraph& wg, const nlohmann::json& harnack_doc, const nlohmann::json& tolerances) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(harnack_doc.dump());
    const DimerGraph& g = wg.graph;
    return {{"format", "DMRW"},
            {"version", kVersion},
            {"region", region_name(g.region)},
            {"N", g.N},
            {"n", g.n},
            {"genus", wg.genus},
            {"vertices", g.vertices.size()},
            {"edges", g.edges.size()},
            {"faces", g.bounded},
            {"harnack_fnv1a", hex.str()},
            {"tolerances", tolerances}};
}

}  // namespace dimer::lattice
