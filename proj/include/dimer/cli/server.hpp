#pragma once

#include <memory>
#include <string>
#include <thread>

namespace dimer::cli {

struct Reply {
    int status = 200;
    std::string body;
    std::string type = "application/json";
};

// Stateless request handler behind the HTTP service.  Bodies are either a
// Harnack document or {"harnack": doc, ...options}.
Reply handle(const std::string& method, const std::string& path, const std::string& body);

class Service {
  public:
    Service();
    ~Service();
    // Binds and serves on a background thread; port 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    // Serves on the calling thread until stop().
    void run(const std::string& host, int port);
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

}  // namespace dimer::cli
