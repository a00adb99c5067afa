#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ase/benchmark.hpp"
#include "ase/clock.hpp"
#include "ase/config.hpp"
#include "ase/embeddings.hpp"
#include "ase/ingestion.hpp"
#include "ase/scoring.hpp"
#include "ase/store.hpp"
#include "ase/summarizer.hpp"

namespace ase {

struct HealthReport {
    HealthStatus store;
    HealthStatus embedding;
    HealthStatus llm;

    bool all_ok() const noexcept { return store.ok && embedding.ok && llm.ok; }
};

/// The pipeline both the CLI and the HTTP service drive: ingest, summarize,
/// score, benchmark. Owns the store and the configured providers.
class Engine {
public:
    struct Overrides {
        std::unique_ptr<EmbeddingProvider> embedder;
        std::unique_ptr<LlmClient> llm;
        Clock clock;
        std::optional<ChainOptions> chain;
    };

    explicit Engine(Config config);
    Engine(Config config, Overrides overrides);
    ~Engine();

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const Config& config() const noexcept { return config_; }
    Store& store() noexcept { return store_; }

    Document ingest_text(std::string title, std::string_view text,
                         DocumentSource source = DocumentSource::inline_text);
    Document ingest_text_file(std::string title, const std::filesystem::path& path);
    Document ingest_pdf(std::string title, const std::filesystem::path& pdf_path);

    /// Request defaults come from the config.
    SummaryRequest default_summary_request() const { return config_.summary_defaults; }
    Summary summarize(const std::string& document_id, SummaryRequest request);

    Attempt score(const std::string& document_id, const std::string& summary_id,
                  std::string_view understanding_text,
                  std::optional<metrics::MetricId> headline = std::nullopt);

    bench::BenchmarkReport benchmark(const std::vector<bench::CorpusEntry>& corpus);

    HealthReport health();

    metrics::MetricContext metric_context();

private:
    Config config_;
    Store store_;
    text::StopwordList stopwords_;
    std::unique_ptr<EmbeddingProvider> embedder_;
    std::unique_ptr<LlmClient> llm_;
    Clock clock_;
    ChainOptions chain_;
};

}  // namespace ase
