#include "ase/serialization.hpp"

#include <cmath>

namespace ase {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::parse_error, std::string("missing field \"") + key + "\"");
    try {
        return it->get<T>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("bad field \"") + key + "\": " + e.what());
    }
}

ErrorCode parse_error_code(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::internal_error); ++i) {
        const auto code = static_cast<ErrorCode>(i);
        if (to_string(code) == s) return code;
    }
    throw Error(ErrorCode::parse_error, "unknown error code '" + std::string(s) + "'");
}

}  // namespace

namespace text {

void to_json(Json& j, const Sentence& s) {
    j = Json{{"text", s.text}, {"start", s.start}, {"end", s.end}};
}

void from_json(const Json& j, Sentence& s) {
    s.text = field<std::string>(j, "text");
    s.start = field<std::size_t>(j, "start");
    s.end = field<std::size_t>(j, "end");
}

}  // namespace text

void to_json(Json& j, const Document& d) {
    j = Json{{"document_id", d.document_id},
             {"title", d.title},
             {"text", d.text},
             {"sentences", d.sentences},
             {"created_at", format_timestamp(d.created_at)},
             {"source", to_string(d.source)}};
}

void from_json(const Json& j, Document& d) {
    d.document_id = field<std::string>(j, "document_id");
    d.title = field<std::string>(j, "title");
    d.text = field<std::string>(j, "text");
    d.sentences = field<std::vector<text::Sentence>>(j, "sentences");
    d.created_at = parse_timestamp(field<std::string>(j, "created_at"));
    d.source = parse_document_source(field<std::string>(j, "source"));
}

void to_json(Json& j, const SummaryRequest& r) {
    j = Json{{"backend", to_string(r.backend)},
             {"target_sentences", r.target_sentences},
             {"chunk_chars", r.chunk_chars},
             {"prompt_template_map", r.prompt_template_map},
             {"prompt_template_reduce", r.prompt_template_reduce}};
}

void from_json(const Json& j, SummaryRequest& r) {
    r.backend = parse_summary_backend(field<std::string>(j, "backend"));
    r.target_sentences = field<std::size_t>(j, "target_sentences");
    r.chunk_chars = field<std::size_t>(j, "chunk_chars");
    r.prompt_template_map = field<std::string>(j, "prompt_template_map");
    r.prompt_template_reduce = field<std::string>(j, "prompt_template_reduce");
}

void to_json(Json& j, const Summary& s) {
    j = Json{{"summary_id", s.summary_id},
             {"document_id", s.document_id},
             {"text", s.text},
             {"backend", to_string(s.backend)},
             {"created_at", format_timestamp(s.created_at)},
             {"params", s.params}};
}

void from_json(const Json& j, Summary& s) {
    s.summary_id = field<std::string>(j, "summary_id");
    s.document_id = field<std::string>(j, "document_id");
    s.text = field<std::string>(j, "text");
    s.backend = parse_summary_backend(field<std::string>(j, "backend"));
    s.created_at = parse_timestamp(field<std::string>(j, "created_at"));
    s.params = field<SummaryRequest>(j, "params");
    s.params.document_id = s.document_id;
}

void to_json(Json& j, const MetricOutcome& o) {
    if (o.ok()) {
        j = Json{{"vs_summary", o.score->vs_summary()},
                 {"vs_original", o.score->vs_original()},
                 {"mean", o.score->mean()},
                 {"percent", format_percent(o.score->mean())}};
    } else {
        j = Json{{"error", {{"code", to_string(o.failure->code)}, {"message", o.failure->message}}}};
    }
}

void to_json(Json& j, const Attempt& a) {
    Json breakdown = Json::object();
    for (const auto& [id, outcome] : a.breakdown) breakdown[std::string(metrics::to_string(id))] = outcome;
    j = Json{{"attempt_id", a.attempt_id},
             {"document_id", a.document_id},
             {"summary_id", a.summary_id},
             {"understanding_text", a.understanding_text},
             {"created_at", format_timestamp(a.created_at)},
             {"breakdown", std::move(breakdown)},
             {"headline_metric", metrics::to_string(a.headline_metric)},
             {"comprehension_percent", a.comprehension_percent},
             {"comprehension_display", format_percent(a.comprehension_percent / 100.0)},
             {"band", to_string(interpret(a.comprehension_percent))}};
}

void from_json(const Json& j, Attempt& a) {
    a.attempt_id = field<std::string>(j, "attempt_id");
    a.document_id = field<std::string>(j, "document_id");
    a.summary_id = field<std::string>(j, "summary_id");
    a.understanding_text = field<std::string>(j, "understanding_text");
    a.created_at = parse_timestamp(field<std::string>(j, "created_at"));
    a.headline_metric = metrics::parse_metric_id(field<std::string>(j, "headline_metric"));
    a.comprehension_percent = field<double>(j, "comprehension_percent");

    const Json breakdown = field<Json>(j, "breakdown");
    a.breakdown.clear();
    for (auto id : metrics::kAllMetrics) {
        const char* key = metrics::to_string(id).data();
        const Json entry = field<Json>(breakdown, key);
        MetricOutcome outcome;
        if (entry.contains("error")) {
            const Json err = field<Json>(entry, "error");
            outcome.failure = MetricFailure{parse_error_code(field<std::string>(err, "code")),
                                            field<std::string>(err, "message")};
        } else {
            try {
                DualScore score(metrics::SimilarityScore(field<double>(entry, "vs_summary")),
                                metrics::SimilarityScore(field<double>(entry, "vs_original")));
                if (score.mean() != field<double>(entry, "mean")) {
                    throw Error(ErrorCode::parse_error, std::string("stored mean for ") + key +
                                                            " is not the average of its two scores");
                }
                outcome.score = score;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::parse_error) throw;
                throw Error(ErrorCode::parse_error, std::string("bad score for ") + key + ": " + e.what());
            }
        }
        a.breakdown.emplace(id, std::move(outcome));
    }
    const MetricOutcome& headline = a.breakdown.at(a.headline_metric);
    if (!headline.ok() || round_percent(headline.score->mean()) != a.comprehension_percent) {
        throw Error(ErrorCode::parse_error, "comprehension_percent disagrees with the headline score");
    }
}

namespace bench {

void to_json(Json& j, const BenchmarkReport& r) {
    Json means = Json::object();
    Json display = Json::object();
    for (const auto& [id, pct] : r.per_metric_mean_percent) {
        means[std::string(metrics::to_string(id))] = pct;
        display[std::string(metrics::to_string(id))] = format_percent(std::clamp(pct / 100.0, 0.0, 1.0));
    }
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json row{{"id", e.id}, {"status", e.scored() ? "scored" : "excluded"}};
        if (e.scored()) {
            Json pct = Json::object();
            for (const auto& [id, p] : e.percent) pct[std::string(metrics::to_string(id))] = p;
            row["percent"] = std::move(pct);
        } else {
            row["error"] = {{"code", to_string(e.failure->code)}, {"message", e.failure->message}};
        }
        if (e.expected_band) row["expected_band"] = *e.expected_band;
        entries.push_back(std::move(row));
    }
    j = Json{{"per_metric_mean_percent", std::move(means)},
             {"per_metric_display", std::move(display)},
             {"entry_count", r.entry_count},
             {"excluded_count", r.excluded_count},
             {"config_fingerprint", r.config_fingerprint},
             {"created_at", format_timestamp(r.created_at)},
             {"entries", std::move(entries)}};
}

}  // namespace bench

}  // namespace ase
