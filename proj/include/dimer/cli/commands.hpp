#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "dimer/error.hpp"
#include "dimer/lattice/height.hpp"
#include "dimer/limitshape/limitshape.hpp"

namespace dimer::cli {

using nlohmann::json;

struct RunConfig {
    std::string command, input, output, svg;
    double tolerance = 1e-10;
    int N = 16;
    long sweeps = 1000;
    long burn_in = -1;
    int chains = 1;
    std::uint64_t seed = 1;
    int resolution = 120;
    int samples = 400;    // points per arctic curve
    double series_eps = 1e-10;  // Poincare series truncation
    int oval_samples = 600;     // LimitShape sampling per arc and oval
    double clip = 6.0;    // amoeba tentacle radius
    bool overlay = true;
    std::string sample_file;
};

// Throws InvalidArgument when a flag is out of range.
void check(const RunConfig& c);

// Coarser series and sampling for interactive previews; arctic curves move by
// about 1e-8 against the defaults.
RunConfig preview_config();

// 0 on success, 2 for clustering violations, 1 for every other module error.
int exit_code(ErrorCode c);
json error_payload(const Error& e);

// FNV-1a of the canonical dump of the Harnack document, as 16 hex digits.
std::string provenance(const json& doc);

struct Output {
    json data;
    std::string svg;
};

json cmd_validate(const json& doc);
json cmd_admissify(const json& doc, const RunConfig& c);
Output cmd_arctic(const json& doc, const RunConfig& c);
Output cmd_maps(const json& doc, const RunConfig& c);
Output cmd_height(const json& doc, const RunConfig& c);

// Weighted graph of size c.N as a DMRW container plus its JSON sidecar.
struct WeightsOutput {
    std::string container;
    json sidecar;
};
WeightsOutput cmd_weights(const json& doc, const RunConfig& c);

// Final configuration of each chain after c.sweeps sweeps.
json cmd_sample(const json& doc, const RunConfig& c);
// SVG of a sample (computed when `sample` is null) with the arctic overlay.
std::string cmd_render(const json& doc, const RunConfig& c, const json& sample = nullptr);

// Tiles of a configuration coloured by local height gradient.  curves may be
// empty (no overlay).
std::string render_configuration(const lattice::DimerGraph& g, const lattice::Matching& m,
                                 const std::vector<limitshape::ArcticCurve>& curves, const std::string& tag);

// Level-set segments of a grid field (NaN cells skipped).
std::vector<std::array<std::array<double, 2>, 2>> level_set(const limitshape::LimitShapeField& F, double level);

}  // namespace dimer::cli
