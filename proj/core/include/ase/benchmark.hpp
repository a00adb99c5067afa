#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ase/clock.hpp"
#include "ase/metrics.hpp"
#include "ase/scoring.hpp"
#include "ase/summarizer.hpp"

namespace ase::bench {

struct CorpusEntry {
    std::string id;
    std::string text;
    std::string understanding;
    std::optional<std::string> expected_band;

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

/// One JSON object per line: {id, text, understanding, expected_band?}.
/// Blank lines are skipped. Throws not_found, ParseError (1-based line) or
/// duplicate_id.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path);
std::vector<CorpusEntry> parse_corpus(std::string_view contents);

struct EntryResult {
    std::string id;
    /// Per-metric round_percent of the dual-score mean; empty when excluded.
    std::map<metrics::MetricId, double> percent;
    std::optional<MetricFailure> failure;
    std::optional<std::string> expected_band;

    bool scored() const noexcept { return !failure.has_value(); }
};

struct BenchmarkReport {
    std::map<metrics::MetricId, double> per_metric_mean_percent;
    std::size_t entry_count = 0;
    std::size_t excluded_count = 0;
    std::string config_fingerprint;
    Timestamp created_at{};
    std::vector<EntryResult> entries;
};

struct BenchmarkConfig {
    SummaryRequest summary;
    metrics::MetricContext metrics;
    /// Canonical description of the summarizer and embedding setup; hashed
    /// into the report fingerprint.
    std::string config_description;
    LlmClient* llm = nullptr;
    ChainOptions chain;
    std::size_t max_in_flight = 4;
    Clock clock;
};

/// Ingests, summarizes and scores every entry; per metric, averages the entry
/// percentages over entries where all four metrics succeeded. Throws
/// all_entries_failed when nothing could be scored.
BenchmarkReport run_benchmark(const std::vector<CorpusEntry>& corpus, const BenchmarkConfig& config);

/// Fixed-width table with columns S.NO., Similarity Metrics, Score.
std::string render_report(const BenchmarkReport& report);

std::string fingerprint(std::string_view config_description);

}  // namespace ase::bench
