#pragma once

// JSON record schema shared by the store, the HTTP API and `--format json`.

#include "ase/benchmark.hpp"
#include "ase/ingestion.hpp"
#include "ase/scoring.hpp"
#include "ase/summarizer.hpp"
#include "json.hpp"

namespace ase {

using Json = nlohmann::json;

namespace text {
void to_json(Json& j, const Sentence& s);
void from_json(const Json& j, Sentence& s);
}  // namespace text

void to_json(Json& j, const Document& d);
void from_json(const Json& j, Document& d);

void to_json(Json& j, const SummaryRequest& r);
void from_json(const Json& j, SummaryRequest& r);

void to_json(Json& j, const Summary& s);
void from_json(const Json& j, Summary& s);

void to_json(Json& j, const MetricOutcome& o);

/// Attempt records carry the derived display string and band alongside the
/// numeric fields. Reading validates the dual-score and percent invariants
/// and throws parse_error on violation.
void to_json(Json& j, const Attempt& a);
void from_json(const Json& j, Attempt& a);

namespace bench {
void to_json(Json& j, const BenchmarkReport& r);
}  // namespace bench

}  // namespace ase
