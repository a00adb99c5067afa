#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ase/clock.hpp"
#include "ase/error.hpp"
#include "ase/ingestion.hpp"
#include "ase/metrics.hpp"
#include "ase/summarizer.hpp"

namespace ase {

/// Similarity of one understanding against the summary and the original.
class DualScore {
public:
    DualScore(metrics::SimilarityScore vs_summary, metrics::SimilarityScore vs_original)
        : vs_summary_(vs_summary),
          vs_original_(vs_original),
          mean_((vs_summary.value() + vs_original.value()) / 2.0) {}

    double vs_summary() const noexcept { return vs_summary_.value(); }
    double vs_original() const noexcept { return vs_original_.value(); }
    double mean() const noexcept { return mean_; }

    friend bool operator==(const DualScore&, const DualScore&) = default;

private:
    metrics::SimilarityScore vs_summary_;
    metrics::SimilarityScore vs_original_;
    double mean_;
};

struct MetricFailure {
    ErrorCode code = ErrorCode::internal_error;
    std::string message;

    friend bool operator==(const MetricFailure&, const MetricFailure&) = default;
};

/// Either a score or the reason the metric could not be computed.
struct MetricOutcome {
    std::optional<DualScore> score;
    std::optional<MetricFailure> failure;

    bool ok() const noexcept { return score.has_value(); }

    friend bool operator==(const MetricOutcome&, const MetricOutcome&) = default;
};

enum class Band { strong, adequate, partial, needs_review };

std::string_view to_string(Band b);
Band parse_band(std::string_view s);

struct Attempt {
    std::string attempt_id;
    std::string document_id;
    std::string summary_id;
    std::string understanding_text;
    Timestamp created_at{};
    std::map<metrics::MetricId, MetricOutcome> breakdown;
    metrics::MetricId headline_metric = metrics::MetricId::embedding;
    /// In [0, 100], two decimals.
    double comprehension_percent = 0.0;

    friend bool operator==(const Attempt&, const Attempt&) = default;
};

/// Rounds 100 x `mean` half-up to two decimals, working on the shortest
/// decimal representation of `mean` so 0.70005 gives 70.01. Throws
/// out_of_range outside [0, 1].
double round_percent(double mean);

/// "85.84%". Throws out_of_range outside [0, 1].
std::string format_percent(double mean);

/// Qualitative band for a percentage. Throws out_of_range outside [0, 100].
Band interpret(double comprehension_percent);

struct ScoringOptions {
    metrics::MetricId headline_metric = metrics::MetricId::embedding;
    /// Compute the four metrics on separate threads.
    bool parallel = true;
};

/// Scores `understanding_text` against `summary` and `doc` with every metric.
/// Metric failures are recorded in the breakdown; only a headline failure
/// propagates.
Attempt score_attempt(const Document& doc, const Summary& summary,
                      std::string_view understanding_text, const metrics::MetricContext& ctx,
                      const ScoringOptions& options = {}, Timestamp created_at = {});

}  // namespace ase
