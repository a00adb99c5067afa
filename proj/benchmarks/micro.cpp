#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ase/embeddings.hpp"
#include "ase/ingestion.hpp"
#include "ase/metrics.hpp"
#include "ase/summarizer.hpp"
#include "ase/text.hpp"

namespace {

std::string make_text(std::size_t words, std::uint64_t seed) {
    static const char* vocab[] = {"river", "bank", "water", "flows", "the", "sea", "fish", "money",
                                  "loan",  "boat", "sun",   "cloud", "rain", "a",  "and",  "of"};
    std::mt19937_64 rng(seed);
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        out += vocab[rng() % 16];
        out += (i % 12 == 11) ? ". " : " ";
    }
    return out + "end.";
}

void BM_Tokenize(benchmark::State& state) {
    const std::string text = make_text(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(ase::text::tokenize(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(100)->Arg(1000)->Arg(10000);

void BM_LexicalMetrics(benchmark::State& state) {
    const auto a = ase::text::tokenize(make_text(static_cast<std::size_t>(state.range(0)), 2));
    const auto b = ase::text::tokenize(make_text(static_cast<std::size_t>(state.range(0)), 3));
    const auto va = ase::text::to_term_vector(a);
    const auto vb = ase::text::to_term_vector(b);
    const auto sa = ase::text::to_token_set(a);
    const auto sb = ase::text::to_token_set(b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ase::metrics::cosine_similarity(va, vb));
        benchmark::DoNotOptimize(ase::metrics::sorensen_similarity(sa, sb));
        benchmark::DoNotOptimize(ase::metrics::jaccard_similarity(sa, sb));
    }
}
BENCHMARK(BM_LexicalMetrics)->Arg(100)->Arg(1000);

void BM_DeterministicEmbed(benchmark::State& state) {
    const auto tokens = ase::text::tokenize(make_text(1000, 4));
    const auto dim = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ase::deterministic_embed(tokens, dim));
}
BENCHMARK(BM_DeterministicEmbed)->Arg(64)->Arg(384);

void BM_EmbedTextChunked(benchmark::State& state) {
    ase::DeterministicEmbeddingProvider provider(64, 3000);
    const std::string text = make_text(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(ase::embed_text(provider, text));
}
BENCHMARK(BM_EmbedTextChunked)->Arg(500)->Arg(5000);

void BM_Extractive(benchmark::State& state) {
    const auto doc = ase::make_document("b", make_text(static_cast<std::size_t>(state.range(0)), 6),
                                        ase::DocumentSource::inline_text, {});
    for (auto _ : state) benchmark::DoNotOptimize(ase::extractive_summarize(doc, 5));
}
BENCHMARK(BM_Extractive)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
