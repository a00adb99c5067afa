#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "ase/clock.hpp"
#include "ase/embeddings.hpp"
#include "ase/ingestion.hpp"

namespace ase {

enum class SummaryBackend { llm_chain, extractive };

std::string_view to_string(SummaryBackend b);
/// Accepts "llm_chain", "llm" and "extractive"; anything else is invalid_request.
SummaryBackend parse_summary_backend(std::string_view s);

inline constexpr std::string_view kDefaultMapPrompt = "Summarize the following text concisely:\n{text}";
inline constexpr std::string_view kDefaultReducePrompt =
    "Combine the following partial summaries into one coherent summary:\n{text}";

struct SummaryRequest {
    std::string document_id;
    SummaryBackend backend = SummaryBackend::extractive;
    std::size_t target_sentences = 5;
    std::size_t chunk_chars = 3000;
    std::string prompt_template_map{kDefaultMapPrompt};
    std::string prompt_template_reduce{kDefaultReducePrompt};

    friend bool operator==(const SummaryRequest&, const SummaryRequest&) = default;
};

struct Summary {
    std::string summary_id;
    std::string document_id;
    std::string text;
    SummaryBackend backend = SummaryBackend::extractive;
    Timestamp created_at{};
    SummaryRequest params;

    friend bool operator==(const Summary&, const Summary&) = default;
};

/// Text-completion boundary for the map-reduce chain. Must be safe for
/// concurrent calls.
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual HealthStatus healthcheck() = 0;
};

struct LlmClientConfig {
    std::string endpoint_url;
    std::string model_name;
    std::chrono::milliseconds timeout{30'000};
    std::size_t max_in_flight = 4;
};

/// POST endpoint_url {"model": ..., "prompt": ...} -> {"text": ...}
class HttpLlmClient final : public LlmClient {
public:
    explicit HttpLlmClient(LlmClientConfig config);
    ~HttpLlmClient() override;

    std::string complete(const std::string& prompt) override;
    HealthStatus healthcheck() override;

private:
    LlmClientConfig config_;
    struct State;
    std::unique_ptr<State> state_;
};

struct RetryPolicy {
    /// Retries after the first failed attempt.
    int max_retries = 2;
    std::chrono::milliseconds initial_backoff{1000};
    /// Injected so tests do not actually wait.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct ChainOptions {
    RetryPolicy retry;
    std::size_t max_in_flight = 4;
    int max_reduce_depth = 5;
};

/// Replaces every "{text}" in `tmpl`.
std::string render_prompt(std::string_view tmpl, std::string_view text);

/// Frequency-scored sentence extraction; emits the top `target_sentences`
/// sentences in document order.
Summary extractive_summarize(const Document& doc, std::size_t target_sentences,
                             Timestamp created_at = {});

/// Map each sentence-aligned chunk through the map prompt, then reduce the
/// concatenated partials (recursively while they exceed chunk_chars).
Summary llm_chain_summarize(const Document& doc, const SummaryRequest& request, LlmClient& llm,
                            const ChainOptions& options = {}, Timestamp created_at = {});

/// Validates `request` against `doc` and dispatches on its backend. `llm`
/// may be null for the extractive backend.
Summary run_summarizer(const Document& doc, const SummaryRequest& request, LlmClient* llm,
                       const ChainOptions& options, Timestamp created_at);

}  // namespace ase
