#include "http_client.hpp"

#include "ase/error.hpp"
#include "httplib.h"

namespace ase::detail {

Endpoint parse_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::invalid_request, "endpoint URL must be absolute: '" + url + "'");
    }
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::invalid_request, "unsupported URL scheme: '" + scheme + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    if (path_start == std::string::npos) {
        ep.scheme_host_port = url;
        ep.path = "/";
    } else {
        ep.scheme_host_port = url.substr(0, path_start);
        ep.path = url.substr(path_start);
    }
    if (ep.scheme_host_port.size() <= scheme_end + 3) {
        throw Error(ErrorCode::invalid_request, "endpoint URL has no host: '" + url + "'");
    }
    return ep;
}

nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
    httplib::Client client(endpoint.scheme_host_port);
    const auto secs = static_cast<time_t>(timeout.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    auto res = client.Post(endpoint.path, body.dump(), "application/json");
    if (!res) {
        throw ProviderUnavailable(endpoint.scheme_host_port + endpoint.path + ": " +
                                      httplib::to_string(res.error()),
                                  true);
    }
    if (res->status < 200 || res->status >= 300) {
        const bool retryable = res->status >= 500 || res->status == 429;
        throw ProviderUnavailable(endpoint.scheme_host_port + endpoint.path + " returned HTTP " +
                                      std::to_string(res->status),
                                  retryable);
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::provider_contract, std::string("response is not JSON: ") + e.what());
    }
}

}  // namespace ase::detail
