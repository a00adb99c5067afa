#include "cli.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ase/benchmark.hpp"
#include "ase/config.hpp"
#include "ase/engine.hpp"
#include "ase/error.hpp"
#include "ase/serialization.hpp"
#include "ase/service.hpp"

namespace ase::cli {
namespace {

struct Globals {
    std::string config_file;
    std::string store;
    std::string format = "text";
    std::string embedding_kind;
    std::string embedding_url;
    std::string embedding_model;
    std::string embedding_dim;
    std::vector<std::string> settings;
};

Config resolve_config(const Globals& g, char** environ) {
    Config c = g.config_file.empty() ? Config{} : load_config_file(g.config_file);
    apply_environment(c, environ);
    auto set = [&](const char* key, const std::string& value) {
        if (!value.empty()) apply_setting(c, key, value);
    };
    set("store_root", g.store);
    set("embedding_kind", g.embedding_kind);
    set("embedding_url", g.embedding_url);
    set("embedding_model", g.embedding_model);
    set("embedding_dim", g.embedding_dim);
    for (const auto& kv : g.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::invalid_request, "--set expects KEY=VALUE, got '" + kv + "'");
        apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return c;
}

std::string read_path(const std::string& path, std::istream& in) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::not_found, "file not found: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string cell(const MetricOutcome& o, double (DualScore::*field)() const) {
    if (!o.ok()) return "-";
    return format_percent(((*o.score).*field)());
}

void print_attempt(std::ostream& out, const Attempt& a) {
    char line[160];
    std::snprintf(line, sizeof line, "%-27s%12s%13s%10s\n", "Metric", "vs Summary", "vs Original", "Mean");
    out << line;
    for (auto id : metrics::kAllMetrics) {
        const auto& o = a.breakdown.at(id);
        const std::string name(metrics::display_name(id));
        if (o.ok()) {
            std::snprintf(line, sizeof line, "%-27s%12s%13s%10s\n", name.c_str(),
                          cell(o, &DualScore::vs_summary).c_str(), cell(o, &DualScore::vs_original).c_str(),
                          cell(o, &DualScore::mean).c_str());
        } else {
            std::snprintf(line, sizeof line, "%-27serror: %s\n", name.c_str(),
                          std::string(to_string(o.failure->code)).c_str());
        }
        out << line;
    }
    out << "Comprehension: " << format_percent(a.comprehension_percent / 100.0) << " ("
        << to_string(interpret(a.comprehension_percent)) << ", headline " << metrics::to_string(a.headline_metric)
        << ")\n";
}

std::pair<std::string, int> split_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::invalid_request, "bind address must be HOST:PORT");
    int port = 0;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        port = -1;
    }
    if (port < 0 || port > 65535) throw Error(ErrorCode::invalid_request, "bad port in '" + bind + "'");
    return {bind.substr(0, colon), port};
}

int serve(Engine& engine, const std::string& bind, std::ostream& out) {
    const auto [host, port] = split_bind(bind);
    HttpService service(engine);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
    });

    bool ok = false;
    if (port == 0) {
        const int actual = service.bind_to_any_port(host);
        if (actual > 0) {
            out << "listening on " << host << ":" << actual << std::endl;
            ok = service.listen_after_bind();
        }
    } else {
        out << "listening on " << host << ":" << port << std::endl;
        ok = service.listen(host, port);
    }
    pthread_kill(waiter.native_handle(), SIGTERM);
    if (!ok) throw Error(ErrorCode::internal_error, "could not listen on " + bind);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            char** environ) {
    CLI::App app{"Summarize documents and score a reader's understanding against them.", "ase"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_file, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--store", g.store, "Store root directory");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--embedding-kind", g.embedding_kind, "deterministic or remote");
    app.add_option("--embedding-url", g.embedding_url, "Remote embedding endpoint");
    app.add_option("--embedding-model", g.embedding_model, "Remote embedding model name");
    app.add_option("--embedding-dim", g.embedding_dim, "Deterministic embedding dimension");
    app.add_option("--set", g.settings, "Any config key as KEY=VALUE");

    auto* ingest = app.add_subcommand("ingest", "Add a document to the store");
    std::string title = "Untitled";
    std::string text_file;
    std::string pdf;
    std::string inline_text;
    ingest->add_option("--title", title, "Document title");
    auto* o_tf = ingest->add_option("--text-file", text_file, "Plain-text file ('-' for stdin)");
    auto* o_pdf = ingest->add_option("--pdf", pdf, "PDF file, run through the configured extractor");
    auto* o_text = ingest->add_option("--text", inline_text, "Inline text");
    o_tf->excludes(o_pdf)->excludes(o_text);
    o_pdf->excludes(o_text);

    auto* summarize = app.add_subcommand("summarize", "Summarize a stored document");
    std::string doc_id;
    std::string backend;
    std::optional<std::size_t> target_sentences;
    std::optional<std::size_t> chunk_chars;
    std::string llm_url;
    std::string llm_model;
    summarize->add_option("--doc", doc_id, "Document id")->required();
    summarize->add_option("--summarizer", backend, "extractive or llm_chain");
    summarize->add_option("--target-sentences", target_sentences)->check(CLI::PositiveNumber);
    summarize->add_option("--chunk-chars", chunk_chars)->check(CLI::PositiveNumber);
    summarize->add_option("--llm-url", llm_url, "Text-completion endpoint");
    summarize->add_option("--llm-model", llm_model, "Text-completion model name");

    auto* score = app.add_subcommand("score", "Score an understanding against a summary and its document");
    std::string summary_id;
    std::string understanding_file;
    std::string understanding;
    std::string headline;
    score->add_option("--doc", doc_id, "Document id")->required();
    score->add_option("--summary", summary_id, "Summary id")->required();
    auto* o_uf = score->add_option("--understanding-file", understanding_file, "File with the understanding text");
    auto* o_u = score->add_option("--understanding", understanding, "Understanding text ('-' for stdin)");
    o_uf->excludes(o_u);
    score->add_option("--headline-metric", headline, "cosine, sorensen, jaccard or embedding");

    auto* benchmark = app.add_subcommand("benchmark", "Run a labeled corpus through the pipeline");
    std::string corpus;
    std::string out_dir;
    benchmark->add_option("--corpus", corpus, "Newline-delimited JSON corpus")->required();
    benchmark->add_option("--out", out_dir, "Directory for benchmark_report.json");

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    std::string bind;
    serve_cmd->add_option("--bind", bind, "HOST:PORT");

    auto* health = app.add_subcommand("health", "Check the store and providers");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (ingest->parsed() && o_tf->count() + o_pdf->count() + o_text->count() == 0) {
        err << "ingest: one of --text-file, --pdf or --text is required\n";
        return 2;
    }
    if (score->parsed() && o_uf->count() + o_u->count() == 0) {
        err << "score: one of --understanding-file or --understanding is required\n";
        return 2;
    }

    const bool json = g.format == "json";
    try {
        Config config = resolve_config(g, environ);
        if (!llm_url.empty()) config.llm_url = llm_url;
        if (!llm_model.empty()) config.llm_model = llm_model;
        Engine engine(config);

        if (ingest->parsed()) {
            Document doc;
            if (!pdf.empty()) {
                doc = engine.ingest_pdf(title, pdf);
            } else if (!text_file.empty() && text_file != "-") {
                doc = engine.ingest_text_file(title, text_file);
            } else if (!text_file.empty()) {
                doc = engine.ingest_text(title, read_path("-", in), DocumentSource::text_file);
            } else {
                doc = engine.ingest_text(title, inline_text);
            }
            if (json) {
                out << Json(doc).dump(2) << "\n";
            } else {
                out << doc.document_id << "\n";
            }
        } else if (summarize->parsed()) {
            SummaryRequest req = engine.default_summary_request();
            if (!backend.empty()) req.backend = parse_summary_backend(backend);
            if (target_sentences) req.target_sentences = *target_sentences;
            if (chunk_chars) req.chunk_chars = *chunk_chars;
            const Summary s = engine.summarize(doc_id, req);
            if (json) {
                out << Json(s).dump(2) << "\n";
            } else {
                out << s.summary_id << "\n" << s.text << "\n";
            }
        } else if (score->parsed()) {
            const std::string text = o_uf->count() > 0 ? read_path(understanding_file, in)
                                     : understanding == "-" ? read_path("-", in)
                                                            : understanding;
            std::optional<metrics::MetricId> h;
            if (!headline.empty()) h = metrics::parse_metric_id(headline);
            const Attempt a = engine.score(doc_id, summary_id, text, h);
            if (json) {
                out << Json(a).dump(2) << "\n";
            } else {
                print_attempt(out, a);
            }
        } else if (benchmark->parsed()) {
            const auto report = engine.benchmark(bench::load_corpus(corpus));
            const std::string report_json = Json(report).dump(2) + "\n";
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream f(std::filesystem::path(out_dir) / "benchmark_report.json", std::ios::binary);
                f << report_json;
                if (!f) throw Error(ErrorCode::internal_error, "could not write report to " + out_dir);
            }
            if (json) {
                out << report_json;
            } else {
                out << bench::render_report(report);
                if (report.excluded_count > 0) out << "excluded entries: " << report.excluded_count << "\n";
            }
        } else if (serve_cmd->parsed()) {
            return serve(engine, bind.empty() ? config.bind_address : bind, out);
        } else if (health->parsed()) {
            const HealthReport h = engine.health();
            if (json) {
                auto entry = [](const HealthStatus& s) {
                    return Json{{"status", s.ok ? "ok" : "error"}, {"detail", s.detail}};
                };
                out << Json{{"store", entry(h.store)}, {"embedding", entry(h.embedding)}, {"llm", entry(h.llm)}}.dump(2)
                    << "\n";
            } else {
                for (const auto& [name, s] : {std::pair<const char*, const HealthStatus&>{"store", h.store},
                                              {"embedding", h.embedding},
                                              {"llm", h.llm}}) {
                    out << name << ": " << (s.ok ? "ok" : "error");
                    if (!s.ok) out << " (" << s.detail << ")";
                    out << "\n";
                }
            }
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal_error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace ase::cli
