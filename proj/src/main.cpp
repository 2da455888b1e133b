#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dimer/cli/commands.hpp"
#include "dimer/cli/server.hpp"

using namespace dimer;
using namespace dimer::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << bytes;
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, path + ": " + e.what());
    }
}

// JSON to --output (stdout when empty), SVG to --svg or next to the output.
void emit(const RunConfig& c, const json& data, const std::string& svg = {}) {
    if (c.output.empty())
        std::cout << data.dump(2) << "\n";
    else
        spill(c.output, data.dump(2) + "\n");
    if (svg.empty()) return;
    std::string path = c.svg;
    if (path.empty() && !c.output.empty()) {
        path = c.output;
        auto dot = path.find_last_of('.');
        if (dot != std::string::npos && path.find('/', dot) == std::string::npos) path.erase(dot);
        path += ".svg";
    }
    if (!path.empty()) spill(path, svg);
}

int run(RunConfig& c) {
    check(c);
    if (c.command == "serve") return 0;
    json doc = read_json(c.input);
    if (c.command == "validate") {
        emit(c, cmd_validate(doc));
    } else if (c.command == "admissify") {
        json r = cmd_admissify(doc, c);
        if (c.output.empty())
            std::cout << r.dump(2) << "\n";
        else
            spill(c.output, r.at("harnack").dump(2) + "\n");
        if (r.contains("residual"))
            std::cerr << "residual " << r["residual"] << ", max angle change " << r["displacement"] << "\n";
    } else if (c.command == "arctic") {
        auto o = cmd_arctic(doc, c);
        emit(c, o.data, o.svg);
    } else if (c.command == "maps") {
        auto o = cmd_maps(doc, c);
        emit(c, o.data, o.svg);
    } else if (c.command == "height") {
        auto o = cmd_height(doc, c);
        emit(c, o.data, o.svg);
    } else if (c.command == "weights") {
        if (c.output.empty()) throw Error(ErrorCode::InvalidArgument, "weights needs --output");
        auto w = cmd_weights(doc, c);
        spill(c.output, w.container);
        spill(c.output + ".json", w.sidecar.dump(2) + "\n");
    } else if (c.command == "sample") {
        emit(c, cmd_sample(doc, c));
    } else if (c.command == "render") {
        json smp = c.sample_file.empty() ? json(nullptr) : read_json(c.sample_file);
        std::string svg = cmd_render(doc, c, smp);
        if (c.output.empty())
            std::cout << svg;
        else
            spill(c.output, svg);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimer limit shapes from Harnack data"};
    app.require_subcommand(1);
    RunConfig c;
    int port = 8080;
    std::string host = "127.0.0.1";
    bool no_overlay = false;

    auto add = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("-i,--input", c.input, "Harnack document (JSON)")->required()->check(CLI::ExistingFile);
        s->add_option("-o,--output", c.output, "output path (stdout when omitted)");
        s->add_option("--tolerance", c.tolerance, "numerical tolerance")->capture_default_str();
        return s;
    };
    add("validate", "check a Harnack document");
    add("admissify", "adjust hexagon angles until the cover is admissible");
    for (auto* s : {add("arctic", "arctic curves"), add("maps", "amoeba and polygon images"),
                    add("height", "limit-shape height on a grid")}) {
        s->add_option("--svg", c.svg, "SVG path (default: output with .svg)");
        s->add_option("--resolution", c.resolution, "grid size per side")->capture_default_str();
        s->add_option("--samples", c.samples, "points per curve")->capture_default_str();
        s->add_option("--clip", c.clip, "amoeba clip radius")->capture_default_str();
        s->add_option("--series-eps", c.series_eps, "Poincare series tolerance")->capture_default_str();
    }
    for (auto* s : {add("weights", "weighted graph container"), add("sample", "Metropolis flip sampler"),
                    add("render", "SVG of a sample with arctic overlay")}) {
        s->add_option("-N,--n", c.N, "region size in fundamental domains")->capture_default_str();
        s->add_option("--sweeps", c.sweeps, "measured sweeps")->capture_default_str();
        s->add_option("--burn-in", c.burn_in, "burn-in sweeps (default 20 N)");
        s->add_option("--chains", c.chains, "independent chains")->capture_default_str();
        s->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
        s->add_option("--samples", c.samples, "points per arctic curve")->capture_default_str();
        s->add_option("--series-eps", c.series_eps, "Poincare series tolerance")->capture_default_str();
        if (s->get_name() == "render") {
            s->add_option("--sample", c.sample_file, "sample JSON from `sample` (run a chain when omitted)");
            s->add_flag("--no-overlay", no_overlay, "omit the arctic curves");
        }
    }
    auto* serve = app.add_subcommand("serve", "HTTP/JSON service");
    serve->add_option("--port", port, "port")->capture_default_str();
    serve->add_option("--host", host, "bind address")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    c.command = app.get_subcommands().front()->get_name();
    c.overlay = !no_overlay;

    try {
        if (c.command == "serve") {
            Service svc;
            std::cerr << "listening on " << host << ":" << port << "\n";
            svc.run(host, port);
            return 0;
        }
        return run(c);
    } catch (const Error& e) {
        std::cerr << error_payload(e).dump() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
