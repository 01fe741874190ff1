#pragma once

#include <memory>
#include <string>

#include "newspop/pipeline.hpp"

namespace httplib {
class Server;
}

namespace newspop::service {

struct HttpResult {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Serves one immutable bundle. Handlers only read shared state.
class Service {
public:
    explicit Service(pipeline::Bundle bundle);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Routes one request. Used by the HTTP server and directly by tests.
    HttpResult handle(const std::string& method, const std::string& path, const std::string& body) const;

    /// Binds and serves until stop(). Returns false when binding fails.
    bool listen(const std::string& host, int port);
    /// Binds to a free port and returns it, or -1; serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

    const pipeline::Bundle& bundle() const { return bundle_; }

private:
    void install_routes();

    const pipeline::Bundle bundle_;
    const std::string metadata_;
    std::unique_ptr<httplib::Server> server_;
};

HttpResult error_result(int status, const std::string& code, const std::string& message, const std::string& field = {});

}  // namespace newspop::service
