#include "ase/service.hpp"

#include <charconv>

#include "ase/serialization.hpp"
#include "httplib.h"

namespace ase {
namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, const ApiError& err) {
    send_json(res, err.http_status, Json{{"error", {{"code", err.code}, {"message", err.message}}}});
}

Json parse_body(const httplib::Request& req) {
    Json body;
    try {
        body = Json::parse(req.body);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::invalid_request, std::string("request body is not valid JSON: ") + e.what());
    }
    if (!body.is_object()) throw Error(ErrorCode::invalid_request, "request body must be a JSON object");
    return body;
}

std::optional<std::string> optional_string(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw Error(ErrorCode::invalid_request, std::string("\"") + key + "\" must be a string");
    }
    return it->get<std::string>();
}

std::optional<std::size_t> optional_count(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer() || it->get<long long>() <= 0) {
        throw Error(ErrorCode::invalid_request, std::string("\"") + key + "\" must be a positive integer");
    }
    return it->get<std::size_t>();
}

std::size_t limit_param(const httplib::Request& req) {
    if (!req.has_param("limit")) return 0;
    const std::string v = req.get_param_value("limit");
    std::size_t n = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw Error(ErrorCode::invalid_request, "limit must be a non-negative integer");
    }
    return n;
}

Json document_listing(const Document& d) {
    return Json{{"document_id", d.document_id},
                {"title", d.title},
                {"created_at", format_timestamp(d.created_at)},
                {"source", to_string(d.source)},
                {"sentence_count", d.sentences.size()}};
}

Json health_entry(const HealthStatus& s) {
    return s.ok ? Json("ok") : Json("error");
}

}  // namespace

ApiError to_api_error(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        return ApiError{http_status(err->code()), std::string(to_string(err->code())), err->what()};
    }
    return ApiError{500, "internal_error", e.what()};
}

struct HttpService::Impl {
    explicit Impl(Engine& e) : engine(e) {}

    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const std::exception& e) {
                send_error(res, to_api_error(e));
            }
        };
    }

    void routes();

    Engine& engine;
    httplib::Server server;
};

void HttpService::Impl::routes() {
    server.Post("/api/documents", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const Json body = parse_body(req);
        const auto title = optional_string(body, "title").value_or("Untitled");
        const auto text = optional_string(body, "text");
        const auto pdf_path = optional_string(body, "pdf_path");
        if (text.has_value() == pdf_path.has_value()) {
            throw Error(ErrorCode::invalid_request, "provide exactly one of \"text\" and \"pdf_path\"");
        }
        const Document doc = text ? engine.ingest_text(title, *text) : engine.ingest_pdf(title, *pdf_path);
        send_json(res, 201, document_listing(doc));
    }));

    server.Post(R"(/api/documents/([A-Za-z0-9_-]+)/summaries)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const Json body = req.body.empty() ? Json::object() : parse_body(req);
        SummaryRequest request = engine.default_summary_request();
        if (auto b = optional_string(body, "backend")) request.backend = parse_summary_backend(*b);
        if (auto k = optional_count(body, "target_sentences")) request.target_sentences = *k;
        if (auto c = optional_count(body, "chunk_chars")) request.chunk_chars = *c;
        if (auto m = optional_string(body, "prompt_template_map")) request.prompt_template_map = *m;
        if (auto r = optional_string(body, "prompt_template_reduce")) request.prompt_template_reduce = *r;
        const Summary s = engine.summarize(id, request);
        send_json(res, 201, Json{{"summary_id", s.summary_id},
                                 {"document_id", s.document_id},
                                 {"backend", to_string(s.backend)},
                                 {"text", s.text}});
    }));

    server.Post(R"(/api/documents/([A-Za-z0-9_-]+)/attempts)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const Json body = parse_body(req);
        const auto summary_id = optional_string(body, "summary_id");
        if (!summary_id) throw Error(ErrorCode::invalid_request, "\"summary_id\" is required");
        const auto understanding = optional_string(body, "understanding_text").value_or("");
        std::optional<metrics::MetricId> headline;
        if (auto h = optional_string(body, "headline_metric")) headline = metrics::parse_metric_id(*h);
        const Attempt a = engine.score(id, *summary_id, understanding, headline);
        send_json(res, 201, Json{{"attempt", a}});
    }));

    server.Get("/api/documents", guarded([this](const httplib::Request& req, httplib::Response& res) {
        Json out = Json::array();
        for (const auto& d : engine.store().list_documents(limit_param(req))) {
            out.push_back(document_listing(d));
        }
        send_json(res, 200, out);
    }));

    server.Get(R"(/api/documents/([A-Za-z0-9_-]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 200, Json(engine.store().get_document(req.matches[1])));
    }));

    server.Get(R"(/api/documents/([A-Za-z0-9_-]+)/attempts)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        (void)engine.store().get_document(id);
        Json out = Json::array();
        for (const auto& a : engine.store().list_attempts(id, limit_param(req))) out.push_back(a);
        send_json(res, 200, out);
    }));

    server.Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
        const HealthReport h = engine.health();
        Json details = Json::object();
        if (!h.store.ok) details["store"] = h.store.detail;
        if (!h.embedding.ok) details["embedding"] = h.embedding.detail;
        if (!h.llm.ok) details["llm"] = h.llm.detail;
        send_json(res, 200, Json{{"store", health_entry(h.store)},
                                 {"embedding", health_entry(h.embedding)},
                                 {"llm", health_entry(h.llm)},
                                 {"details", details}});
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 404 && res.body.empty()) {
            send_error(res, ApiError{404, "not_found", "no such endpoint"});
        }
    });
}

HttpService::HttpService(Engine& engine) : impl_(std::make_unique<Impl>(engine)) { impl_->routes(); }

HttpService::~HttpService() { stop(); }

bool HttpService::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpService::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
    if (impl_) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace ase
