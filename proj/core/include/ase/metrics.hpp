#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "ase/text.hpp"

namespace ase {
class EmbeddingProvider;
class EmbeddingVector;
}  // namespace ase

namespace ase::metrics {

/// A similarity in [0, 1]. Construction outside the range throws out_of_range.
class SimilarityScore {
public:
    explicit SimilarityScore(double value);

    double value() const noexcept { return value_; }

    friend bool operator==(const SimilarityScore&, const SimilarityScore&) = default;

private:
    double value_;
};

enum class MetricId { cosine, sorensen, jaccard, embedding };

inline constexpr std::array<MetricId, 4> kAllMetrics = {
    MetricId::cosine, MetricId::sorensen, MetricId::jaccard, MetricId::embedding};

std::string_view to_string(MetricId id);
/// Throws invalid_request for anything but the four lowercase identifiers.
MetricId parse_metric_id(std::string_view s);
std::optional<MetricId> try_parse_metric_id(std::string_view s);

/// Row label used in the benchmark table.
std::string_view display_name(MetricId id);

SimilarityScore cosine_similarity(const text::TermVector& a, const text::TermVector& b);
SimilarityScore sorensen_similarity(const text::TokenSet& a, const text::TokenSet& b);
SimilarityScore jaccard_similarity(const text::TokenSet& a, const text::TokenSet& b);
/// Cosine of two dense vectors with negative values clamped to 0.
SimilarityScore embedding_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// What compute_metric needs besides the two texts.
struct MetricContext {
    text::TokenizeOptions tokenize;
    const text::IdfTable* idf = nullptr;
    EmbeddingProvider* embedder = nullptr;
};

SimilarityScore compute_metric(MetricId id, std::string_view user_text,
                               std::string_view reference_text, const MetricContext& ctx);

}  // namespace ase::metrics
