#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace ase::detail {

struct Endpoint {
    std::string scheme_host_port;  // "http://127.0.0.1:8080"
    std::string path;              // "/v1/embed"
};

/// Splits an http(s) URL into the origin and the request path. Throws
/// invalid_request on anything that is not an absolute http URL.
Endpoint parse_endpoint(const std::string& url);

/// POSTs a JSON body and returns the parsed JSON response. Transport failures
/// and non-2xx statuses throw ProviderUnavailable (retryable for transport
/// errors, 5xx and 429); an unparsable body throws provider_contract.
nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body,
                         std::chrono::milliseconds timeout);

}  // namespace ase::detail
