#include "ase/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <semaphore>

#include "ase/error.hpp"
#include "ase/ingestion.hpp"
#include "http_client.hpp"

namespace ase {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::ptrdiff_t kMaxInFlight = 64;

std::vector<double> l2_normalized(std::vector<double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0)) throw Error(ErrorCode::zero_magnitude, "cannot normalize a zero vector");
    for (double& x : v) x /= norm;
    return v;
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)) {
    if (components_.empty()) {
        throw Error(ErrorCode::provider_contract, "embedding vector has dimension 0");
    }
    for (double x : components_) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::provider_contract, "embedding vector has a non-finite component");
        }
    }
}

double EmbeddingVector::norm() const {
    double sq = 0.0;
    for (double x : components_) sq += x * x;
    return std::sqrt(sq);
}

std::string_view to_string(EmbeddingKind kind) {
    return kind == EmbeddingKind::remote ? "remote" : "deterministic";
}

EmbeddingKind parse_embedding_kind(std::string_view s) {
    if (s == "remote") return EmbeddingKind::remote;
    if (s == "deterministic") return EmbeddingKind::deterministic;
    throw Error(ErrorCode::invalid_request,
                "unknown embedding kind '" + std::string(s) + "' (expected remote or deterministic)");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t SplitMix64::next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EmbeddingVector deterministic_embed(const text::TokenSequence& tokens, std::size_t dimension) {
    if (tokens.empty()) throw Error(ErrorCode::empty_tokens, "cannot embed an empty token sequence");
    if (dimension == 0) throw Error(ErrorCode::invalid_request, "embedding dimension must be positive");

    // Byte-ordered distinct tokens: the sum order is fixed by the multiset alone.
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tokens.tokens) ++counts[t.str()];

    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    std::vector<double> sum(dimension, 0.0);
    for (const auto& [token, count] : counts) {
        SplitMix64 rng{fnv1a64(token)};
        const auto c = static_cast<double>(count);
        for (std::size_t i = 0; i < dimension; ++i) {
            const double u = static_cast<double>(rng.next() >> 11) * kScale * 2.0 - 1.0;
            sum[i] += c * u;
        }
    }
    return EmbeddingVector(l2_normalized(std::move(sum)));
}

DeterministicEmbeddingProvider::DeterministicEmbeddingProvider(std::size_t dimension,
                                                               std::size_t max_chunk_chars,
                                                               text::TokenizeOptions tokenize)
    : dimension_(dimension), max_chunk_chars_(max_chunk_chars), tokenize_(tokenize) {
    if (dimension_ == 0) throw Error(ErrorCode::invalid_request, "embedding dimension must be positive");
    if (max_chunk_chars_ == 0) throw Error(ErrorCode::invalid_request, "max_chunk_chars must be positive");
}

EmbeddingVector DeterministicEmbeddingProvider::embed(std::string_view text) {
    return deterministic_embed(text::tokenize(text, tokenize_), dimension_);
}

struct RemoteEmbeddingProvider::State {
    explicit State(std::ptrdiff_t in_flight) : slots(in_flight) {}

    detail::Endpoint endpoint;
    std::counting_semaphore<kMaxInFlight> slots;
    std::atomic<std::size_t> dimension{0};
};

RemoteEmbeddingProvider::RemoteEmbeddingProvider(EmbeddingProviderConfig config)
    : config_(std::move(config)) {
    if (config_.kind != EmbeddingKind::remote) {
        throw Error(ErrorCode::invalid_request, "remote provider needs kind=remote");
    }
    if (config_.endpoint_url.empty() || config_.model_name.empty()) {
        throw Error(ErrorCode::invalid_request,
                    "remote embedding provider needs endpoint_url and model_name");
    }
    if (config_.max_chunk_chars == 0) {
        throw Error(ErrorCode::invalid_request, "max_chunk_chars must be positive");
    }
    const auto in_flight = static_cast<std::ptrdiff_t>(
        std::clamp<std::size_t>(config_.max_in_flight, 1, kMaxInFlight));
    state_ = std::make_unique<State>(in_flight);
    state_->endpoint = detail::parse_endpoint(config_.endpoint_url);
}

RemoteEmbeddingProvider::~RemoteEmbeddingProvider() = default;

std::optional<std::size_t> RemoteEmbeddingProvider::session_dimension() const {
    const std::size_t d = state_->dimension.load();
    if (d == 0) return std::nullopt;
    return d;
}

EmbeddingVector RemoteEmbeddingProvider::embed(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::empty_text, "cannot embed empty text");
    const nlohmann::json body = {{"model", config_.model_name}, {"input", std::string(text)}};

    state_->slots.acquire();
    nlohmann::json response;
    try {
        response = detail::post_json(state_->endpoint, body, config_.timeout);
    } catch (...) {
        state_->slots.release();
        throw;
    }
    state_->slots.release();

    if (!response.is_object() || !response.contains("embedding") ||
        !response["embedding"].is_array()) {
        throw Error(ErrorCode::provider_contract, "response lacks an \"embedding\" array");
    }
    std::vector<double> components;
    components.reserve(response["embedding"].size());
    for (const auto& x : response["embedding"]) {
        if (!x.is_number()) {
            throw Error(ErrorCode::provider_contract, "embedding component is not a number");
        }
        components.push_back(x.get<double>());
    }
    EmbeddingVector v(std::move(components));

    std::size_t expected = 0;
    if (!state_->dimension.compare_exchange_strong(expected, v.dimension()) &&
        expected != v.dimension()) {
        throw Error(ErrorCode::provider_contract,
                    "embedding dimension changed within session: " + std::to_string(expected) +
                        " then " + std::to_string(v.dimension()));
    }
    return v;
}

HealthStatus RemoteEmbeddingProvider::healthcheck() {
    try {
        (void)embed("healthcheck");
        return {};
    } catch (const std::exception& e) {
        return HealthStatus{false, e.what()};
    }
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config) {
    if (config.kind == EmbeddingKind::remote) {
        return std::make_unique<RemoteEmbeddingProvider>(config);
    }
    return std::make_unique<DeterministicEmbeddingProvider>(config.dimension, config.max_chunk_chars);
}

EmbeddingVector embed_text(EmbeddingProvider& provider, std::string_view text) {
    if (text::tokenize(text).empty()) {
        throw Error(ErrorCode::empty_text, "text has no tokens to embed");
    }
    const std::size_t limit = provider.max_chunk_chars();
    if (text::char_count(text) <= limit) return provider.embed(text);

    const auto sentences = text::split_sentences(text);
    const auto chunks = chunk_sentences(sentences, limit);
    std::vector<double> sum;
    std::size_t used = 0;
    for (const auto& chunk : chunks) {
        if (text::tokenize(chunk.text).empty()) continue;
        const EmbeddingVector v = provider.embed(chunk.text);
        if (sum.empty()) {
            sum.assign(v.dimension(), 0.0);
        } else if (v.dimension() != sum.size()) {
            throw Error(ErrorCode::provider_contract, "chunk embeddings disagree on dimension");
        }
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
        ++used;
    }
    for (double& x : sum) x /= static_cast<double>(used);
    return EmbeddingVector(l2_normalized(std::move(sum)));
}

HealthStatus provider_healthcheck(EmbeddingProvider& provider) {
    try {
        return provider.healthcheck();
    } catch (const std::exception& e) {
        return HealthStatus{false, e.what()};
    }
}

}  // namespace ase
