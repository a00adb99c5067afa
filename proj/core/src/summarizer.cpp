#include "ase/summarizer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <semaphore>
#include <thread>

#include "ase/error.hpp"
#include "http_client.hpp"

namespace ase {
namespace {

constexpr std::ptrdiff_t kMaxInFlight = 64;
constexpr std::string_view kPartialSeparator = "\n\n";

void require_sentences(const Document& doc) {
    if (doc.sentences.empty()) {
        throw Error(ErrorCode::empty_document, "document '" + doc.document_id + "' has no sentences");
    }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string complete_with_retry(LlmClient& llm, const std::string& prompt, const RetryPolicy& policy) {
    auto backoff = policy.initial_backoff;
    for (int attempt = 0;; ++attempt) {
        try {
            std::string out = llm.complete(prompt);
            if (out.find_first_not_of(" \t\r\n") == std::string::npos) {
                throw Error(ErrorCode::provider_contract, "LLM returned an empty completion");
            }
            return out;
        } catch (const ProviderUnavailable& e) {
            if (!e.retryable() || attempt >= policy.max_retries) {
                throw ProviderUnavailable("LLM call failed after " + std::to_string(attempt + 1) +
                                              " attempt(s): " + e.what(),
                                          e.retryable());
            }
        }
        if (policy.sleep) {
            policy.sleep(backoff);
        } else {
            std::this_thread::sleep_for(backoff);
        }
        backoff *= 2;
    }
}

/// Runs `fn(i)` for i in [0, n) on at most `width` threads; rethrows the
/// first failure after all workers stop.
template <typename Fn>
void bounded_parallel_for(std::size_t n, std::size_t width, Fn fn) {
    width = std::clamp<std::size_t>(width, 1, static_cast<std::size_t>(kMaxInFlight));
    if (n <= 1 || width == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < std::min(width, n); ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mu);
                        if (!failure) failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(SummaryBackend b) {
    return b == SummaryBackend::llm_chain ? "llm_chain" : "extractive";
}

SummaryBackend parse_summary_backend(std::string_view s) {
    if (s == "llm_chain" || s == "llm") return SummaryBackend::llm_chain;
    if (s == "extractive") return SummaryBackend::extractive;
    throw Error(ErrorCode::invalid_request, "unknown summarizer backend '" + std::string(s) + "'");
}

std::string render_prompt(std::string_view tmpl, std::string_view text) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const auto hit = tmpl.find("{text}", pos);
        if (hit == std::string_view::npos) break;
        out.append(tmpl.substr(pos, hit - pos));
        out.append(text);
        pos = hit + 6;
    }
    out.append(tmpl.substr(pos));
    return out;
}

Summary extractive_summarize(const Document& doc, std::size_t target_sentences, Timestamp created_at) {
    require_sentences(doc);
    if (target_sentences == 0) {
        throw Error(ErrorCode::invalid_request, "target_sentences must be at least 1");
    }
    const auto& stop = text::StopwordList::builtin();

    std::vector<std::vector<std::string>> sentence_terms(doc.sentences.size());
    std::map<std::string, std::size_t> frequency;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        for (const auto& t : text::tokenize(doc.sentences[i].text).tokens) {
            if (stop.contains(t.str())) continue;
            sentence_terms[i].push_back(t.str());
            ++frequency[t.str()];
        }
    }

    std::vector<double> score(doc.sentences.size(), 0.0);
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        if (sentence_terms[i].empty()) continue;
        std::size_t total = 0;
        for (const auto& term : sentence_terms[i]) total += frequency[term];
        score[i] = static_cast<double>(total) / static_cast<double>(sentence_terms[i].size());
    }

    std::vector<std::size_t> order(doc.sentences.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    order.resize(std::min(target_sentences, order.size()));
    std::sort(order.begin(), order.end());

    Summary s;
    s.summary_id = new_uuid();
    s.document_id = doc.document_id;
    s.backend = SummaryBackend::extractive;
    s.created_at = created_at;
    s.params.document_id = doc.document_id;
    s.params.backend = SummaryBackend::extractive;
    s.params.target_sentences = target_sentences;
    for (std::size_t idx : order) {
        if (!s.text.empty()) s.text += ' ';
        s.text += doc.sentences[idx].text;
    }
    return s;
}

Summary llm_chain_summarize(const Document& doc, const SummaryRequest& request, LlmClient& llm,
                            const ChainOptions& options, Timestamp created_at) {
    require_sentences(doc);
    const auto chunks = chunk_text(doc, request.chunk_chars);

    std::vector<std::string> partials(chunks.size());
    bounded_parallel_for(chunks.size(), options.max_in_flight, [&](std::size_t i) {
        partials[i] = complete_with_retry(
            llm, render_prompt(request.prompt_template_map, chunks[i].text), options.retry);
    });

    auto reduce = [&](const std::string& joined) {
        return complete_with_retry(llm, render_prompt(request.prompt_template_reduce, joined),
                                   options.retry);
    };

    std::string final_text;
    for (int depth = 1;; ++depth) {
        const std::string joined = join(partials, kPartialSeparator);
        if (partials.size() == 1 || text::char_count(joined) <= request.chunk_chars) {
            final_text = reduce(joined);
            break;
        }
        if (depth >= options.max_reduce_depth) {
            throw Error(ErrorCode::reduce_depth_exceeded,
                        "reduce step did not fit in " + std::to_string(request.chunk_chars) +
                            " characters after " + std::to_string(depth) + " levels");
        }
        std::vector<std::vector<std::string>> groups;
        std::size_t group_chars = 0;
        for (auto& p : partials) {
            const std::size_t len = text::char_count(p);
            if (groups.empty() ||
                group_chars + kPartialSeparator.size() + len > request.chunk_chars) {
                groups.emplace_back();
                group_chars = len;
            } else {
                group_chars += kPartialSeparator.size() + len;
            }
            groups.back().push_back(std::move(p));
        }
        std::vector<std::string> next(groups.size());
        bounded_parallel_for(groups.size(), options.max_in_flight, [&](std::size_t i) {
            next[i] = reduce(join(groups[i], kPartialSeparator));
        });
        partials = std::move(next);
    }

    Summary s;
    s.summary_id = new_uuid();
    s.document_id = doc.document_id;
    s.text = std::move(final_text);
    s.backend = SummaryBackend::llm_chain;
    s.created_at = created_at;
    s.params = request;
    s.params.document_id = doc.document_id;
    return s;
}

Summary run_summarizer(const Document& doc, const SummaryRequest& request, LlmClient* llm,
                       const ChainOptions& options, Timestamp created_at) {
    if (!request.document_id.empty() && request.document_id != doc.document_id) {
        throw Error(ErrorCode::invalid_request, "summary request targets a different document");
    }
    switch (request.backend) {
        case SummaryBackend::extractive: {
            Summary s = extractive_summarize(doc, request.target_sentences, created_at);
            s.params = request;
            s.params.document_id = doc.document_id;
            return s;
        }
        case SummaryBackend::llm_chain:
            if (request.chunk_chars < kMinChunkChars) {
                throw Error(ErrorCode::invalid_request,
                            "chunk_chars must be at least " + std::to_string(kMinChunkChars));
            }
            if (llm == nullptr) {
                throw ProviderUnavailable("no LLM endpoint configured", false);
            }
            return llm_chain_summarize(doc, request, *llm, options, created_at);
    }
    throw Error(ErrorCode::invalid_request, "unknown summarizer backend");
}

struct HttpLlmClient::State {
    explicit State(std::ptrdiff_t in_flight) : slots(in_flight) {}
    detail::Endpoint endpoint;
    std::counting_semaphore<kMaxInFlight> slots;
};

HttpLlmClient::HttpLlmClient(LlmClientConfig config) : config_(std::move(config)) {
    if (config_.endpoint_url.empty()) {
        throw Error(ErrorCode::invalid_request, "LLM client needs an endpoint URL");
    }
    state_ = std::make_unique<State>(static_cast<std::ptrdiff_t>(
        std::clamp<std::size_t>(config_.max_in_flight, 1, kMaxInFlight)));
    state_->endpoint = detail::parse_endpoint(config_.endpoint_url);
}

HttpLlmClient::~HttpLlmClient() = default;

std::string HttpLlmClient::complete(const std::string& prompt) {
    const nlohmann::json body = {{"model", config_.model_name}, {"prompt", prompt}};
    state_->slots.acquire();
    nlohmann::json response;
    try {
        response = detail::post_json(state_->endpoint, body, config_.timeout);
    } catch (...) {
        state_->slots.release();
        throw;
    }
    state_->slots.release();
    if (!response.is_object() || !response.contains("text") || !response["text"].is_string()) {
        throw Error(ErrorCode::provider_contract, "LLM response lacks a \"text\" string");
    }
    return response["text"].get<std::string>();
}

HealthStatus HttpLlmClient::healthcheck() {
    try {
        (void)complete("healthcheck");
        return {};
    } catch (const std::exception& e) {
        return HealthStatus{false, e.what()};
    }
}

}  // namespace ase
