#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ase/text.hpp"

namespace ase {

/// Dense real vector with positive dimension and finite components.
class EmbeddingVector {
public:
    /// Throws provider_contract if empty or any component is non-finite.
    explicit EmbeddingVector(std::vector<double> components);

    std::span<const double> components() const noexcept { return components_; }
    std::size_t dimension() const noexcept { return components_.size(); }
    double operator[](std::size_t i) const { return components_[i]; }
    double norm() const;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<double> components_;
};

enum class EmbeddingKind { remote, deterministic };

struct EmbeddingProviderConfig {
    EmbeddingKind kind = EmbeddingKind::deterministic;
    std::string endpoint_url;
    std::string model_name;
    std::size_t dimension = 64;
    std::chrono::milliseconds timeout{30'000};
    std::size_t max_chunk_chars = 3000;
    std::size_t max_in_flight = 4;
};

std::string_view to_string(EmbeddingKind kind);
EmbeddingKind parse_embedding_kind(std::string_view s);

struct HealthStatus {
    bool ok = true;
    std::string detail;
};

/// Turns a single piece of text (at most one chunk) into a vector.
/// Implementations must be safe for concurrent calls.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual EmbeddingVector embed(std::string_view text) = 0;
    virtual HealthStatus healthcheck() = 0;
    virtual std::size_t max_chunk_chars() const = 0;
};

// FNV-1a 64-bit and splitmix64, exposed for reproducibility checks.
std::uint64_t fnv1a64(std::string_view bytes);

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next();
};

/// Hashed-PRNG document vector: L2-normalized sum of count(t) * v_t over
/// distinct tokens t. Throws empty_tokens for an empty sequence.
EmbeddingVector deterministic_embed(const text::TokenSequence& tokens, std::size_t dimension);

class DeterministicEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit DeterministicEmbeddingProvider(std::size_t dimension = 64,
                                            std::size_t max_chunk_chars = 3000,
                                            text::TokenizeOptions tokenize = {});

    EmbeddingVector embed(std::string_view text) override;
    HealthStatus healthcheck() override { return {}; }
    std::size_t max_chunk_chars() const override { return max_chunk_chars_; }
    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
    std::size_t max_chunk_chars_;
    text::TokenizeOptions tokenize_;
};

/// Client for the single-text HTTP embedding contract:
///   POST endpoint_url  {"model": ..., "input": ...}  ->  {"embedding": [...]}
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(EmbeddingProviderConfig config);
    ~RemoteEmbeddingProvider() override;

    EmbeddingVector embed(std::string_view text) override;
    HealthStatus healthcheck() override;
    std::size_t max_chunk_chars() const override { return config_.max_chunk_chars; }

    /// Dimension observed on the first successful response, if any.
    std::optional<std::size_t> session_dimension() const;

private:
    EmbeddingProviderConfig config_;
    struct State;
    std::unique_ptr<State> state_;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config);

/// Embeds arbitrary-length text: whole text when it fits in one chunk,
/// otherwise the L2-normalized mean of per-chunk vectors. Throws empty_text
/// when `text` has no tokens.
EmbeddingVector embed_text(EmbeddingProvider& provider, std::string_view text);

HealthStatus provider_healthcheck(EmbeddingProvider& provider);

}  // namespace ase
