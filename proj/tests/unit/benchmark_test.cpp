#include "doctest.h"

#include <cstdlib>

#include "ase/benchmark.hpp"
#include "ase/config.hpp"
#include "ase/engine.hpp"
#include "ase/error.hpp"
#include "ase/serialization.hpp"
#include "test_support.hpp"

using namespace ase;
using namespace ase::bench;
using metrics::MetricId;

namespace {

template <typename Fn>
ErrorCode code_of(Fn fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal_error;
}

const std::filesystem::path kCorpus = std::filesystem::path(ASE_TEST_DATA_DIR) / "corpus" / "synthetic.jsonl";
const std::filesystem::path kGolden = std::filesystem::path(ASE_TEST_GOLDEN_DIR) / "benchmark_report.json";

Timestamp fixed_time() { return parse_timestamp("2026-01-01T00:00:00.000000Z"); }

BenchmarkConfig deterministic_config(EmbeddingProvider& emb) {
    BenchmarkConfig c;
    c.metrics.embedder = &emb;
    c.config_description = "test";
    c.clock = fixed_time;
    return c;
}

/// Deterministic, except that any text mentioning "poison" is refused.
class PoisonEmbeddingProvider final : public EmbeddingProvider {
public:
    EmbeddingVector embed(std::string_view text) override {
        if (text.find("poison") != std::string_view::npos) {
            throw ProviderUnavailable("refused", false);
        }
        return inner_.embed(text);
    }
    HealthStatus healthcheck() override { return {}; }
    std::size_t max_chunk_chars() const override { return inner_.max_chunk_chars(); }

private:
    DeterministicEmbeddingProvider inner_{32};
};

std::string golden_report_text() {
    testing::TempDir dir;
    Config config;
    config.store_root = dir / "store";
    Engine::Overrides o;
    o.clock = fixed_time;
    Engine engine(config, std::move(o));
    return Json(engine.benchmark(load_corpus(kCorpus))).dump(2) + "\n";
}

}  // namespace

TEST_CASE("corpus parsing") {
    const auto entries = parse_corpus(
        "{\"id\":\"a\",\"text\":\"T.\",\"understanding\":\"U\",\"expected_band\":\"strong\"}\n"
        "\n"
        "{\"id\":\"b\",\"text\":\"T2.\",\"understanding\":\"U2\"}\n");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].expected_band == std::optional<std::string>("strong"));
    CHECK_FALSE(entries[1].expected_band.has_value());

    try {
        (void)parse_corpus("{\"id\":\"a\",\"text\":\"T\",\"understanding\":\"U\"}\n\n{oops\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK(code_of([] { (void)parse_corpus("{\"id\":\"a\",\"text\":\"T\"}"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { (void)parse_corpus("[1]"); }) == ErrorCode::parse_error);
    CHECK(code_of([] {
              (void)parse_corpus("{\"id\":\"a\",\"text\":\"T\",\"understanding\":\"U\"}\n"
                                 "{\"id\":\"a\",\"text\":\"T\",\"understanding\":\"U\"}");
          }) == ErrorCode::duplicate_id);
    CHECK(code_of([] { (void)load_corpus("/nonexistent/corpus.jsonl"); }) == ErrorCode::not_found);
    CHECK(load_corpus(kCorpus).size() == 12);
}

TEST_CASE("an identity corpus scores 100 on every metric") {
    DeterministicEmbeddingProvider emb(32);
    auto config = deterministic_config(emb);
    config.summary.target_sentences = 100;
    std::vector<CorpusEntry> corpus = {{"one", "Alpha beta. Gamma delta.", "Alpha beta. Gamma delta.", {}},
                                       {"two", "Rivers run downhill.", "Rivers run downhill.", {}}};
    const auto r = run_benchmark(corpus, config);
    CHECK(r.entry_count == 2);
    for (auto id : metrics::kAllMetrics) CHECK(r.per_metric_mean_percent.at(id) == 100.0);
}

TEST_CASE("a single-entry report echoes that entry") {
    DeterministicEmbeddingProvider emb(32);
    const auto r = run_benchmark({{"x", "Cats sleep a lot. Dogs bark.", "cats nap", {}}}, deterministic_config(emb));
    REQUIRE(r.entries.size() == 1);
    for (auto id : metrics::kAllMetrics) CHECK(r.per_metric_mean_percent.at(id) == r.entries[0].percent.at(id));
}

TEST_CASE("failing entries are excluded and counted") {
    PoisonEmbeddingProvider emb;
    auto config = deterministic_config(emb);
    std::vector<CorpusEntry> corpus = {{"ok", "Fine text here.", "fine text", {}},
                                       {"bad", "Fine text here.", "poison words", {}},
                                       {"ok2", "Other fine text.", "other text", {}}};
    const auto r = run_benchmark(corpus, config);
    CHECK(r.entry_count == 2);
    CHECK(r.excluded_count == 1);
    CHECK(r.entry_count + r.excluded_count == corpus.size());
    CHECK_FALSE(r.entries[1].scored());
    CHECK(r.entries[1].failure->code == ErrorCode::provider_unavailable);
    for (auto id : metrics::kAllMetrics) {
        CHECK(r.per_metric_mean_percent.at(id) == (r.entries[0].percent.at(id) + r.entries[2].percent.at(id)) / 2.0);
    }

    CHECK(code_of([&] { (void)run_benchmark({{"bad", "T.", "poison", {}}}, config); }) ==
          ErrorCode::all_entries_failed);
    CHECK(code_of([&] { (void)run_benchmark({}, config); }) == ErrorCode::invalid_request);
}

TEST_CASE("reports do not depend on worker count") {
    DeterministicEmbeddingProvider emb(32);
    auto config = deterministic_config(emb);
    const auto corpus = load_corpus(kCorpus);
    config.max_in_flight = 1;
    const std::string serial = Json(run_benchmark(corpus, config)).dump();
    config.max_in_flight = 8;
    CHECK(Json(run_benchmark(corpus, config)).dump() == serial);
}

TEST_CASE("fingerprints follow the configuration") {
    CHECK(fingerprint("a") == fingerprint("a"));
    CHECK(fingerprint("a") != fingerprint("b"));
    CHECK(fingerprint("").size() == 16);
}

TEST_CASE("the bundled corpus reproduces the pinned report") {
    const std::string actual = golden_report_text();
    if (std::getenv("ASE_WRITE_GOLDEN") != nullptr) testing::write_file(kGolden, actual);
    const std::string expected = testing::read_file(kGolden);
    REQUIRE_FALSE(expected.empty());
    CHECK(actual == expected);
}

TEST_CASE("the rendered table lists the four metrics in order") {
    BenchmarkReport r;
    r.per_metric_mean_percent = {{MetricId::cosine, 63.0},
                                 {MetricId::sorensen, 77.04},
                                 {MetricId::jaccard, 62.67},
                                 {MetricId::embedding, 85.84}};
    CHECK(render_report(r) ==
          "S.NO.  Similarity Metrics         Score\n"
          "1      Cosine Similarity Score    63.00%\n"
          "2      Sorensen Similarity        77.04%\n"
          "3      Jaccard Similarity         62.67%\n"
          "4      Bert-Based Embeddings      85.84%\n");
}
