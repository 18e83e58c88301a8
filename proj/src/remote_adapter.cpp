#include "relgraph/chat_adapter.hpp"
#include "relgraph/error.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace relgraph {

namespace {

struct Endpoint {
    std::string origin; // scheme://host[:port]
    std::string path;   // prefix, no trailing slash
};

Endpoint split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw ConfigError("ROCAR_API_BASE must be an absolute URL, got '" + url + "'");
    }
    const auto slash = url.find('/', scheme + 3);
    Endpoint e{url.substr(0, slash), slash == std::string::npos ? "" : url.substr(slash)};
    while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
    return e;
}

} // namespace

RemoteAdapter::RemoteAdapter(std::string base_url, std::string api_key, std::string model)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), model_(std::move(model)) {
    split_url(base_url_);
}

std::unique_ptr<RemoteAdapter> RemoteAdapter::from_environment(std::string model) {
    const char* base = std::getenv("ROCAR_API_BASE");
    const char* key = std::getenv("ROCAR_API_KEY");
    if (base == nullptr || *base == '\0') {
        throw ConfigError("the remote adapter needs ROCAR_API_BASE");
    }
    if (key == nullptr || *key == '\0') {
        throw ConfigError("the remote adapter needs ROCAR_API_KEY");
    }
    return std::make_unique<RemoteAdapter>(base, key, std::move(model));
}

std::string RemoteAdapter::submit(const std::string&, std::span<const Message> history) {
    nlohmann::json body;
    body["model"] = model_;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : history) {
        body["messages"].push_back({{"role", std::string(role_token(m.role))}, {"content", m.text}});
    }
    const auto payload = body.dump();
    const auto endpoint = split_url(base_url_);

    std::string last_error;
    for (int attempt = 0; attempt < kRemoteAttempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::seconds(1 << (attempt - 1)));
        }
        httplib::Client client(endpoint.origin);
        client.set_bearer_token_auth(api_key_);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        const auto res = client.Post(endpoint.path + "/chat/completions", payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500 && res->status != 429) break;
            continue;
        }
        try {
            const auto reply = nlohmann::json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("unexpected response body: ") + e.what();
        }
    }
    throw AdapterFailure("remote adapter: " + last_error);
}

} // namespace relgraph
