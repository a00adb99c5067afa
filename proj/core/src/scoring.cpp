#include "ase/scoring.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <vector>

namespace ase {
namespace {

/// 10^4 x mean, rounded half-up in decimal.
long long ten_thousandths(double mean) {
    if (!(mean >= 0.0 && mean <= 1.0)) {
        throw Error(ErrorCode::out_of_range, "mean score outside [0, 1]: " + std::to_string(mean));
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, mean, std::chars_format::fixed);
    const std::string_view digits(buf, static_cast<std::size_t>(res.ptr - buf));
    const auto dot = digits.find('.');
    const std::string_view whole = digits.substr(0, dot);
    std::string frac = dot == std::string_view::npos ? std::string() : std::string(digits.substr(dot + 1));
    frac.resize(std::max<std::size_t>(frac.size(), 5), '0');

    long long n = 0;
    for (char c : whole) n = n * 10 + (c - '0');
    for (int i = 0; i < 4; ++i) n = n * 10 + (frac[static_cast<std::size_t>(i)] - '0');
    if (frac[4] >= '5') ++n;
    return n;
}

MetricOutcome evaluate(metrics::MetricId id, std::string_view understanding,
                       const Summary& summary, const Document& doc,
                       const metrics::MetricContext& ctx) {
    MetricOutcome out;
    try {
        const auto vs_summary = metrics::compute_metric(id, understanding, summary.text, ctx);
        const auto vs_original = metrics::compute_metric(id, understanding, doc.text, ctx);
        out.score = DualScore(vs_summary, vs_original);
    } catch (const Error& e) {
        out.failure = MetricFailure{e.code(), e.what()};
    } catch (const std::exception& e) {
        out.failure = MetricFailure{ErrorCode::internal_error, e.what()};
    }
    return out;
}

}  // namespace

std::string_view to_string(Band b) {
    switch (b) {
        case Band::strong: return "strong";
        case Band::adequate: return "adequate";
        case Band::partial: return "partial";
        case Band::needs_review: return "needs review";
    }
    return "needs review";
}

Band parse_band(std::string_view s) {
    for (Band b : {Band::strong, Band::adequate, Band::partial, Band::needs_review}) {
        if (to_string(b) == s) return b;
    }
    throw Error(ErrorCode::parse_error, "unknown band '" + std::string(s) + "'");
}

double round_percent(double mean) { return static_cast<double>(ten_thousandths(mean)) / 100.0; }

std::string format_percent(double mean) {
    const long long n = ten_thousandths(mean);
    const long long frac = n % 100;
    return std::to_string(n / 100) + "." + (frac < 10 ? "0" : "") + std::to_string(frac) + "%";
}

Band interpret(double comprehension_percent) {
    if (!(comprehension_percent >= 0.0 && comprehension_percent <= 100.0)) {
        throw Error(ErrorCode::out_of_range,
                    "comprehension percent outside [0, 100]: " + std::to_string(comprehension_percent));
    }
    if (comprehension_percent >= 80.0) return Band::strong;
    if (comprehension_percent >= 60.0) return Band::adequate;
    if (comprehension_percent >= 40.0) return Band::partial;
    return Band::needs_review;
}

Attempt score_attempt(const Document& doc, const Summary& summary,
                      std::string_view understanding_text, const metrics::MetricContext& ctx,
                      const ScoringOptions& options, Timestamp created_at) {
    if (text::tokenize(understanding_text, ctx.tokenize).empty()) {
        throw Error(ErrorCode::empty_understanding, "understanding text has no words");
    }
    if (summary.document_id != doc.document_id) {
        throw Error(ErrorCode::summary_document_mismatch,
                    "summary '" + summary.summary_id + "' belongs to document '" +
                        summary.document_id + "', not '" + doc.document_id + "'");
    }

    Attempt attempt;
    attempt.attempt_id = new_uuid();
    attempt.document_id = doc.document_id;
    attempt.summary_id = summary.summary_id;
    attempt.understanding_text = std::string(understanding_text);
    attempt.created_at = created_at;
    attempt.headline_metric = options.headline_metric;

    if (options.parallel) {
        std::vector<std::pair<metrics::MetricId, std::future<MetricOutcome>>> pending;
        for (auto id : metrics::kAllMetrics) {
            pending.emplace_back(id, std::async(std::launch::async, evaluate, id, understanding_text,
                                                std::cref(summary), std::cref(doc), std::cref(ctx)));
        }
        for (auto& [id, fut] : pending) attempt.breakdown.emplace(id, fut.get());
    } else {
        for (auto id : metrics::kAllMetrics) {
            attempt.breakdown.emplace(id, evaluate(id, understanding_text, summary, doc, ctx));
        }
    }

    const MetricOutcome& headline = attempt.breakdown.at(options.headline_metric);
    if (!headline.ok()) {
        const auto& f = *headline.failure;
        const std::string msg = "headline metric " + std::string(metrics::to_string(options.headline_metric)) +
                                " failed: " + f.message;
        if (f.code == ErrorCode::provider_unavailable) throw ProviderUnavailable(msg, true);
        throw Error(f.code, msg);
    }
    attempt.comprehension_percent = round_percent(headline.score->mean());
    return attempt;
}

}  // namespace ase
