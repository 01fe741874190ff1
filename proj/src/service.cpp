#include "newspop/service.hpp"

#include <httplib.h>

namespace newspop::service {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json table_listing(const scoring::ScoreTable& t, const char* key) {
    ordered_json j;
    j["global_mean"] = t.global_mean;
    j["built_from"] = t.built_from;
    j[key] = t.scores;
    return j;
}

HttpResult ok(const ordered_json& body) { return {200, body.dump() + "\n"}; }

}  // namespace

HttpResult error_result(int status, const std::string& code, const std::string& message, const std::string& field) {
    ordered_json err{{"code", code}, {"message", message}};
    if (!field.empty()) err["field"] = field;
    return {status, ordered_json{{"error", err}}.dump() + "\n"};
}

Service::Service(pipeline::Bundle bundle)
    : bundle_(std::move(bundle)), metadata_(bundle_.metadata().dump() + "\n"), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() = default;

HttpResult Service::handle(const std::string& method, const std::string& path, const std::string& body) const {
    auto only = [&](const char* allowed) -> std::optional<HttpResult> {
        if (method == allowed) return std::nullopt;
        return error_result(405, "method_not_allowed", path + " accepts " + allowed + " only");
    };
    try {
        if (path == "/healthz") {
            if (auto e = only("GET")) return *e;
            return {200, "\"ok\"\n"};
        }
        if (path == "/v1/model") {
            if (auto e = only("GET")) return *e;
            return {200, metadata_};
        }
        if (path == "/v1/sources") {
            if (auto e = only("GET")) return *e;
            return ok(table_listing(bundle_.context.tables.source, "sources"));
        }
        if (path == "/v1/categories") {
            if (auto e = only("GET")) return *e;
            return ok(table_listing(bundle_.context.tables.category, "categories"));
        }
        if (path == "/v1/predict") {
            if (auto e = only("POST")) return *e;
            json request;
            try {
                request = json::parse(body);
            } catch (const json::parse_error& e) {
                return error_result(400, "invalid_json", std::string("request body is not valid JSON: ") + e.what());
            }
            const auto parsed = pipeline::PredictRequest::from_json(request);
            return ok(pipeline::predict(bundle_, parsed).to_json());
        }
        return error_result(404, "not_found", "no route for " + path);
    } catch (const pipeline::RequestError& e) {
        return error_result(400, "invalid_request", e.what(), e.field());
    } catch (const std::exception& e) {
        return error_result(500, "internal", e.what());
    }
}

void Service::install_routes() {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        const auto r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    const std::string any = R"(.*)";
    server_->Get(any, dispatch);
    server_->Post(any, dispatch);
    server_->Put(any, dispatch);
    server_->Delete(any, dispatch);
    server_->Patch(any, dispatch);
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

}  // namespace newspop::service
