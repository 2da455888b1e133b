#include "dimer/cli/server.hpp"

#include "httplib.h"
#include "dimer/cli/commands.hpp"

namespace dimer::cli {

namespace {

Reply json_reply(int status, const json& j) { return {status, j.dump(), "application/json"}; }

RunConfig options(const json& req) {
    RunConfig c = preview_config();
    if (!req.is_object() || !req.contains("harnack")) return c;
    c.series_eps = req.value("series_eps", c.series_eps);
    c.samples = req.value("samples", c.samples);
    c.resolution = req.value("resolution", c.resolution);
    c.tolerance = req.value("tolerance", c.tolerance);
    c.clip = req.value("clip", c.clip);
    check(c);
    return c;
}

const json& document(const json& req) {
    if (req.is_object() && req.contains("harnack")) return req.at("harnack");
    return req;
}

}  // namespace

Reply handle(const std::string& method, const std::string& path, const std::string& body) {
    if (method == "GET" && path == "/health") return {200, "ok", "text/plain"};
    const bool known = path == "/validate" || path == "/arctic" || path == "/admissify" || path == "/maps";
    if (!known) return json_reply(404, {{"error", "NotFound"}, {"message", path}});
    if (method != "POST") return json_reply(405, {{"error", "MethodNotAllowed"}, {"message", method}});
    try {
        json req = json::parse(body);
        const json& doc = document(req);
        RunConfig c = options(req);
        if (path == "/validate") return json_reply(200, cmd_validate(doc));
        if (path == "/admissify") return json_reply(200, cmd_admissify(doc, c));
        Output o = path == "/arctic" ? cmd_arctic(doc, c) : cmd_maps(doc, c);
        o.data["svg"] = o.svg;
        return json_reply(200, o.data);
    } catch (const json::exception& e) {
        return json_reply(400, {{"error", "SchemaError"}, {"message", e.what()}});
    } catch (const Error& e) {
        return json_reply(e.code() == ErrorCode::ClusteringViolation ? 422 : 400, error_payload(e));
    } catch (const std::exception& e) {
        return json_reply(500, {{"error", "Internal"}, {"message", e.what()}});
    }
}

struct Service::Impl {
    httplib::Server server;
};

Service::Service() : impl_(std::make_unique<Impl>()) {
    auto& s = impl_->server;
    s.set_read_timeout(30, 0);
    s.set_write_timeout(30, 0);
    auto bridge = [](const httplib::Request& req, httplib::Response& res) {
        Reply r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.type);
    };
    s.Get("/health", bridge);
    for (const char* p : {"/validate", "/arctic", "/admissify", "/maps"}) {
        s.Post(p, bridge);
        s.Get(p, bridge);
    }
}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
    auto& s = impl_->server;
    int bound = port == 0 ? s.bind_to_any_port(host.c_str()) : (s.bind_to_port(host.c_str(), port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::InvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([&s] { s.listen_after_bind(); });
    s.wait_until_ready();
    return bound;
}

void Service::run(const std::string& host, int port) {
    if (!impl_->server.listen(host.c_str(), port))
        throw Error(ErrorCode::InvalidArgument, "cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace dimer::cli
