#pragma once

#include <exception>
#include <memory>
#include <string>

#include "ase/engine.hpp"
#include "ase/error.hpp"

namespace ase {

struct ApiError {
    int http_status = 500;
    std::string code;
    std::string message;
};

/// Maps any exception to the closed error-code set.
ApiError to_api_error(const std::exception& e);

/// JSON-over-HTTP front end to an Engine.
///
///   POST /api/documents                          {title, text | pdf_path}
///   POST /api/documents/{id}/summaries           {backend?, target_sentences?, ...}
///   POST /api/documents/{id}/attempts            {summary_id, understanding_text, headline_metric?}
///   GET  /api/documents[?limit=N]
///   GET  /api/documents/{id}
///   GET  /api/documents/{id}/attempts[?limit=N]
///   GET  /api/health
class HttpService {
public:
    explicit HttpService(Engine& engine);
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds and serves until stop(). Returns false if binding fails.
    bool listen(const std::string& host, int port);
    /// Binds to an ephemeral port and returns it (or -1); serve with
    /// listen_after_bind().
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ase
