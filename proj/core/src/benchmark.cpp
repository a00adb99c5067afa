#include "ase/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "ase/embeddings.hpp"
#include "ase/error.hpp"
#include "json.hpp"

namespace ase::bench {
namespace {

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(line, std::string("missing string field \"") + key + "\"");
    }
    std::string value = it->get<std::string>();
    if (value.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ParseError(line, std::string("field \"") + key + "\" is empty");
    }
    return value;
}

EntryResult process_entry(const CorpusEntry& entry, const BenchmarkConfig& config) {
    EntryResult result;
    result.id = entry.id;
    result.expected_band = entry.expected_band;
    try {
        const Timestamp now = config.clock ? config.clock() : Timestamp{};
        const Document doc = make_document(entry.id, entry.text, DocumentSource::inline_text, now);
        SummaryRequest request = config.summary;
        request.document_id = doc.document_id;
        const Summary summary = run_summarizer(doc, request, config.llm, config.chain, now);
        ScoringOptions options;
        options.parallel = false;
        const Attempt attempt =
            score_attempt(doc, summary, entry.understanding, config.metrics, options, now);
        for (const auto& [id, outcome] : attempt.breakdown) {
            if (!outcome.ok()) {
                result.failure = *outcome.failure;
                result.percent.clear();
                return result;
            }
            result.percent[id] = round_percent(outcome.score->mean());
        }
    } catch (const Error& e) {
        result.failure = MetricFailure{e.code(), e.what()};
        result.percent.clear();
    }
    return result;
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view contents) {
    std::vector<CorpusEntry> out;
    std::set<std::string> seen;
    std::istringstream in{std::string(contents)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "record is not a JSON object");
        CorpusEntry entry;
        entry.id = required_string(obj, "id", line_no);
        entry.text = required_string(obj, "text", line_no);
        entry.understanding = required_string(obj, "understanding", line_no);
        if (auto it = obj.find("expected_band"); it != obj.end() && !it->is_null()) {
            if (!it->is_string()) throw ParseError(line_no, "\"expected_band\" must be a string");
            entry.expected_band = it->get<std::string>();
        }
        if (!seen.insert(entry.id).second) {
            throw Error(ErrorCode::duplicate_id,
                        "duplicate corpus id '" + entry.id + "' on line " + std::to_string(line_no));
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::not_found, "corpus file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str());
}

std::string fingerprint(std::string_view config_description) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_description)));
    return buf;
}

BenchmarkReport run_benchmark(const std::vector<CorpusEntry>& corpus, const BenchmarkConfig& config) {
    if (corpus.empty()) throw Error(ErrorCode::invalid_request, "benchmark corpus is empty");

    BenchmarkReport report;
    report.created_at = config.clock ? config.clock() : Timestamp{};
    report.config_fingerprint = fingerprint(config.config_description);
    report.entries.resize(corpus.size());

    const std::size_t width = std::clamp<std::size_t>(config.max_in_flight, 1, corpus.size());
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < width; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < corpus.size(); i = next++) {
                    report.entries[i] = process_entry(corpus[i], config);
                }
            });
        }
    }

    // Summed in corpus order.
    std::map<metrics::MetricId, double> sums;
    for (const auto& e : report.entries) {
        if (!e.scored()) {
            ++report.excluded_count;
            continue;
        }
        ++report.entry_count;
        for (auto id : metrics::kAllMetrics) sums[id] += e.percent.at(id);
    }
    if (report.entry_count == 0) {
        throw Error(ErrorCode::all_entries_failed,
                    "all " + std::to_string(corpus.size()) + " corpus entries failed to score");
    }
    for (auto id : metrics::kAllMetrics) {
        report.per_metric_mean_percent[id] = sums[id] / static_cast<double>(report.entry_count);
    }
    return report;
}

std::string render_report(const BenchmarkReport& report) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "%-7s%-27s%s\n", "S.NO.", "Similarity Metrics", "Score");
    out += line;
    int row = 1;
    for (auto id : metrics::kAllMetrics) {
        auto it = report.per_metric_mean_percent.find(id);
        const double pct = it == report.per_metric_mean_percent.end() ? 0.0 : it->second;
        const std::string score = format_percent(std::clamp(pct / 100.0, 0.0, 1.0));
        std::snprintf(line, sizeof line, "%-7d%-27s%s\n", row++,
                      std::string(metrics::display_name(id)).c_str(), score.c_str());
        out += line;
    }
    return out;
}

}  // namespace ase::bench
