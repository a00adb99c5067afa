#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ase/embeddings.hpp"
#include "ase/metrics.hpp"
#include "ase/summarizer.hpp"

namespace ase {

/// Engine configuration. Keys (file, ASE_<KEY> environment variables and
/// CLI flags all use the same names):
///
///   store_root, bind_address, embedding_kind, embedding_url, embedding_model,
///   embedding_dim, embedding_timeout_s, embedding_max_chunk_chars, llm_url,
///   llm_model, llm_timeout_s, pdf_extractor_command, summarizer,
///   target_sentences, chunk_chars, headline_metric, remove_stopwords,
///   stopwords_file, max_in_flight
struct Config {
    std::filesystem::path store_root = "ase-store";
    std::string bind_address = "127.0.0.1:8080";
    EmbeddingProviderConfig embedding;
    std::string llm_url;
    std::string llm_model;
    std::chrono::milliseconds llm_timeout{30'000};
    std::string pdf_extractor_command;
    SummaryRequest summary_defaults;
    metrics::MetricId headline_metric = metrics::MetricId::embedding;
    bool remove_stopwords = false;
    std::filesystem::path stopwords_file;
    std::size_t max_in_flight = 4;
};

/// Sets one key from its string form. Throws invalid_request for unknown keys
/// or unparsable values.
void apply_setting(Config& config, std::string_view key, std::string_view value);

/// Reads a flat JSON object of the keys above.
Config load_config_file(const std::filesystem::path& path);

/// Applies ASE_<UPPERCASE_KEY> variables found in `environ`.
void apply_environment(Config& config, char** environ);

/// Canonical text of the settings that affect scores (summarizer, embedding,
/// tokenization); stable across runs, used for report fingerprints.
std::string describe_scoring_config(const Config& config);

}  // namespace ase
