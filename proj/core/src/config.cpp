#include "ase/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "ase/error.hpp"
#include "json.hpp"

namespace ase {
namespace {

std::size_t parse_count(std::string_view key, std::string_view value) {
    std::size_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || out == 0) {
        throw Error(ErrorCode::invalid_request,
                    std::string(key) + " must be a positive integer, got '" + std::string(value) + "'");
    }
    return out;
}

std::chrono::milliseconds parse_seconds(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const double s = std::stod(std::string(value), &used);
        if (used != value.size() || !(s > 0.0)) throw std::invalid_argument("");
        return std::chrono::milliseconds(static_cast<long long>(s * 1000.0));
    } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_request,
                    std::string(key) + " must be a positive number of seconds, got '" +
                        std::string(value) + "'");
    }
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error(ErrorCode::invalid_request,
                std::string(key) + " must be true or false, got '" + std::string(value) + "'");
}

}  // namespace

void apply_setting(Config& c, std::string_view key, std::string_view value) {
    if (key == "store_root") {
        c.store_root = std::string(value);
    } else if (key == "bind_address") {
        c.bind_address = std::string(value);
    } else if (key == "embedding_kind") {
        c.embedding.kind = parse_embedding_kind(value);
    } else if (key == "embedding_url") {
        c.embedding.endpoint_url = std::string(value);
    } else if (key == "embedding_model") {
        c.embedding.model_name = std::string(value);
    } else if (key == "embedding_dim") {
        c.embedding.dimension = parse_count(key, value);
    } else if (key == "embedding_timeout_s") {
        c.embedding.timeout = parse_seconds(key, value);
    } else if (key == "embedding_max_chunk_chars") {
        c.embedding.max_chunk_chars = parse_count(key, value);
    } else if (key == "llm_url") {
        c.llm_url = std::string(value);
    } else if (key == "llm_model") {
        c.llm_model = std::string(value);
    } else if (key == "llm_timeout_s") {
        c.llm_timeout = parse_seconds(key, value);
    } else if (key == "pdf_extractor_command") {
        c.pdf_extractor_command = std::string(value);
    } else if (key == "summarizer") {
        c.summary_defaults.backend = parse_summary_backend(value);
    } else if (key == "target_sentences") {
        c.summary_defaults.target_sentences = parse_count(key, value);
    } else if (key == "chunk_chars") {
        c.summary_defaults.chunk_chars = parse_count(key, value);
    } else if (key == "headline_metric") {
        c.headline_metric = metrics::parse_metric_id(value);
    } else if (key == "remove_stopwords") {
        c.remove_stopwords = parse_bool(key, value);
    } else if (key == "stopwords_file") {
        c.stopwords_file = std::string(value);
    } else if (key == "max_in_flight") {
        c.max_in_flight = parse_count(key, value);
        c.embedding.max_in_flight = c.max_in_flight;
    } else {
        throw Error(ErrorCode::invalid_request, "unknown config key '" + std::string(key) + "'");
    }
}

Config load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::not_found, "config file not found: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_request, "config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw Error(ErrorCode::invalid_request, "config file must hold a JSON object");
    Config c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string()) {
            apply_setting(c, key, value.get<std::string>());
        } else if (value.is_number() || value.is_boolean()) {
            apply_setting(c, key, value.dump());
        } else {
            throw Error(ErrorCode::invalid_request, "config key '" + key + "' must be a scalar");
        }
    }
    return c;
}

void apply_environment(Config& config, char** environ) {
    if (environ == nullptr) return;
    constexpr std::string_view kPrefix = "ASE_";
    for (char** e = environ; *e != nullptr; ++e) {
        const std::string_view entry(*e);
        if (entry.substr(0, kPrefix.size()) != kPrefix) continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos) continue;
        std::string key(entry.substr(kPrefix.size(), eq - kPrefix.size()));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        apply_setting(config, key, entry.substr(eq + 1));
    }
}

std::string describe_scoring_config(const Config& c) {
    nlohmann::json j = {
        {"summarizer", std::string(to_string(c.summary_defaults.backend))},
        {"target_sentences", c.summary_defaults.target_sentences},
        {"chunk_chars", c.summary_defaults.chunk_chars},
        {"prompt_template_map", c.summary_defaults.prompt_template_map},
        {"prompt_template_reduce", c.summary_defaults.prompt_template_reduce},
        {"llm_model", c.llm_model},
        {"embedding_kind", std::string(to_string(c.embedding.kind))},
        {"embedding_model", c.embedding.model_name},
        {"embedding_dim", c.embedding.dimension},
        {"embedding_max_chunk_chars", c.embedding.max_chunk_chars},
        {"remove_stopwords", c.remove_stopwords},
        {"stopwords_file", c.stopwords_file.string()},
    };
    return j.dump();
}

}  // namespace ase
