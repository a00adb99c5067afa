#include "ase/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ase/embeddings.hpp"
#include "ase/error.hpp"

namespace ase::metrics {
namespace {

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

std::size_t intersection_size(const text::TokenSet& a, const text::TokenSet& b) {
    std::size_t n = 0;
    auto ia = a.members().begin();
    auto ib = b.members().begin();
    while (ia != a.members().end() && ib != b.members().end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

void require_nonempty(const text::TokenSet& a, const text::TokenSet& b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::empty_set, "set similarity needs two non-empty token sets");
    }
}

}  // namespace

SimilarityScore::SimilarityScore(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::out_of_range,
                    "similarity score outside [0, 1]: " + std::to_string(value));
    }
}

std::string_view to_string(MetricId id) {
    switch (id) {
        case MetricId::cosine: return "cosine";
        case MetricId::sorensen: return "sorensen";
        case MetricId::jaccard: return "jaccard";
        case MetricId::embedding: return "embedding";
    }
    return "cosine";
}

std::optional<MetricId> try_parse_metric_id(std::string_view s) {
    for (MetricId id : kAllMetrics) {
        if (to_string(id) == s) return id;
    }
    return std::nullopt;
}

MetricId parse_metric_id(std::string_view s) {
    if (auto id = try_parse_metric_id(s)) return *id;
    throw Error(ErrorCode::invalid_request, "unknown metric '" + std::string(s) +
                                                "' (expected cosine, sorensen, jaccard or embedding)");
}

std::string_view display_name(MetricId id) {
    switch (id) {
        case MetricId::cosine: return "Cosine Similarity Score";
        case MetricId::sorensen: return "Sorensen Similarity";
        case MetricId::jaccard: return "Jaccard Similarity";
        case MetricId::embedding: return "Bert-Based Embeddings";
    }
    return "";
}

SimilarityScore cosine_similarity(const text::TermVector& a, const text::TermVector& b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::empty_vector, "cosine similarity needs two non-empty term vectors");
    }
    double dot = 0.0;
    auto ia = a.weights().begin();
    auto ib = b.weights().begin();
    while (ia != a.weights().end() && ib != b.weights().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    double na = 0.0;
    for (const auto& [_, w] : a.weights()) na += w * w;
    double nb = 0.0;
    for (const auto& [_, w] : b.weights()) nb += w * w;
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): exact 1 for identical inputs.
    return SimilarityScore(clamp_unit(dot / std::sqrt(na * nb)));
}

SimilarityScore sorensen_similarity(const text::TokenSet& a, const text::TokenSet& b) {
    require_nonempty(a, b);
    const auto common = static_cast<double>(intersection_size(a, b));
    return SimilarityScore(clamp_unit(2.0 * common / static_cast<double>(a.size() + b.size())));
}

SimilarityScore jaccard_similarity(const text::TokenSet& a, const text::TokenSet& b) {
    require_nonempty(a, b);
    const std::size_t common = intersection_size(a, b);
    const std::size_t uni = a.size() + b.size() - common;
    return SimilarityScore(clamp_unit(static_cast<double>(common) / static_cast<double>(uni)));
}

SimilarityScore embedding_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "embedding dimensions differ: " + std::to_string(a.dimension()) + " vs " +
                        std::to_string(b.dimension()));
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorCode::zero_magnitude, "embedding vector has zero magnitude");
    }
    return SimilarityScore(clamp_unit(dot / std::sqrt(na * nb)));
}

SimilarityScore compute_metric(MetricId id, std::string_view user_text,
                               std::string_view reference_text, const MetricContext& ctx) {
    switch (id) {
        case MetricId::cosine: {
            const auto a = text::to_term_vector(text::tokenize(user_text, ctx.tokenize), ctx.idf);
            const auto b =
                text::to_term_vector(text::tokenize(reference_text, ctx.tokenize), ctx.idf);
            return cosine_similarity(a, b);
        }
        case MetricId::sorensen:
        case MetricId::jaccard: {
            const auto a = text::to_token_set(text::tokenize(user_text, ctx.tokenize));
            const auto b = text::to_token_set(text::tokenize(reference_text, ctx.tokenize));
            return id == MetricId::sorensen ? sorensen_similarity(a, b) : jaccard_similarity(a, b);
        }
        case MetricId::embedding: {
            if (ctx.embedder == nullptr) {
                throw Error(ErrorCode::provider_unavailable, "no embedding provider configured");
            }
            const auto a = embed_text(*ctx.embedder, user_text);
            const auto b = embed_text(*ctx.embedder, reference_text);
            return embedding_similarity(a, b);
        }
    }
    throw Error(ErrorCode::invalid_request, "unknown metric");
}

}  // namespace ase::metrics
