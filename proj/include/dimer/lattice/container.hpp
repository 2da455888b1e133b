#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "dimer/lattice/weights.hpp"

namespace dimer::lattice {

// Contents of a DMRW file: the weighted graph stripped to what a sampler
// or viewer needs.
struct Container {
    RegionType region = RegionType::Aztec;
    int N = 0, n = 0, genus = 0;
    int vertices = 0;
    std::vector<std::int32_t> edge_w, edge_b;
    std::vector<double> log_abs_K, phase;
    std::vector<std::uint32_t> face_offset;  // bounded faces, size faces + 1
    std::vector<std::int32_t> face_edges;
    std::vector<double> log_abs_W;
    std::vector<std::int8_t> sign_W;
};

std::uint64_t fnv1a(const std::string& bytes);

Container to_container(const WeightedGraph& wg);
std::string encode(const Container& c);
Container decode(const std::string& bytes);

void write_container(const std::string& path, const WeightedGraph& wg);
Container read_container(const std::string& path);

nlohmann::json sidecar(const WeightedGraph& wg, const nlohmann::json& harnack_doc, const nlohmann::json& tolerances);

}  // namespace dimer::lattice
