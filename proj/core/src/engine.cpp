#include "ase/engine.hpp"

#include <fstream>
#include <sstream>

#include "ase/error.hpp"

namespace ase {

Engine::Engine(Config config) : Engine(std::move(config), Overrides{}) {}

Engine::Engine(Config config, Overrides overrides)
    : config_(std::move(config)), store_(config_.store_root) {
    if (!config_.stopwords_file.empty()) stopwords_ = text::StopwordList::load(config_.stopwords_file);

    embedder_ = overrides.embedder ? std::move(overrides.embedder)
                                   : make_embedding_provider(config_.embedding);
    if (overrides.llm) {
        llm_ = std::move(overrides.llm);
    } else if (!config_.llm_url.empty()) {
        llm_ = std::make_unique<HttpLlmClient>(LlmClientConfig{
            config_.llm_url, config_.llm_model, config_.llm_timeout, config_.max_in_flight});
    }
    clock_ = overrides.clock ? std::move(overrides.clock) : system_clock();
    if (overrides.chain) {
        chain_ = *overrides.chain;
    } else {
        chain_.max_in_flight = config_.max_in_flight;
    }
}

Engine::~Engine() = default;

metrics::MetricContext Engine::metric_context() {
    metrics::MetricContext ctx;
    ctx.tokenize.remove_stopwords = config_.remove_stopwords;
    ctx.tokenize.stopwords = config_.stopwords_file.empty() ? nullptr : &stopwords_;
    ctx.embedder = embedder_.get();
    return ctx;
}

Document Engine::ingest_text(std::string title, std::string_view text, DocumentSource source) {
    Document doc = make_document(std::move(title), text, source, clock_());
    store_.put(doc);
    return doc;
}

Document Engine::ingest_text_file(std::string title, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::not_found, "file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_text(std::move(title), buf.str(), DocumentSource::text_file);
}

Document Engine::ingest_pdf(std::string title, const std::filesystem::path& pdf_path) {
    ExtractorOptions opts;
    opts.command = config_.pdf_extractor_command;
    const std::string text = run_pdf_extractor(pdf_path, opts);
    return ingest_text(std::move(title), text, DocumentSource::pdf_extractor);
}

Summary Engine::summarize(const std::string& document_id, SummaryRequest request) {
    const Document doc = store_.get_document(document_id);
    request.document_id = document_id;
    Summary summary = run_summarizer(doc, request, llm_.get(), chain_, clock_());
    store_.put(summary);
    return summary;
}

Attempt Engine::score(const std::string& document_id, const std::string& summary_id,
                      std::string_view understanding_text,
                      std::optional<metrics::MetricId> headline) {
    const Document doc = store_.get_document(document_id);
    const Summary summary = store_.get_summary(summary_id);
    ScoringOptions options;
    options.headline_metric = headline.value_or(config_.headline_metric);
    Attempt attempt = score_attempt(doc, summary, understanding_text, metric_context(), options, clock_());
    store_.put(attempt);
    return attempt;
}

bench::BenchmarkReport Engine::benchmark(const std::vector<bench::CorpusEntry>& corpus) {
    bench::BenchmarkConfig bc;
    bc.summary = config_.summary_defaults;
    bc.metrics = metric_context();
    bc.config_description = describe_scoring_config(config_);
    bc.llm = llm_.get();
    bc.chain = chain_;
    bc.max_in_flight = config_.max_in_flight;
    bc.clock = clock_;
    return bench::run_benchmark(corpus, bc);
}

HealthReport Engine::health() {
    HealthReport r;
    r.store = store_.healthy() ? HealthStatus{} : HealthStatus{false, "store root is not writable"};
    r.embedding = provider_healthcheck(*embedder_);
    if (llm_) {
        try {
            r.llm = llm_->healthcheck();
        } catch (const std::exception& e) {
            r.llm = HealthStatus{false, e.what()};
        }
    } else {
        r.llm = HealthStatus{false, "no LLM endpoint configured"};
    }
    return r;
}

}  // namespace ase
