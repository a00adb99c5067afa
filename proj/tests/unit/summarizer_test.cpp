#include "doctest.h"

#include <random>

#include "ase/error.hpp"
#include "ase/summarizer.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace ase;

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

Document doc_of(const std::string& text) { return make_document("t", text, DocumentSource::inline_text, {}); }

// Repeated arg-max selection over naive per-sentence scores.
std::string oracle_extract(const Document& doc, std::size_t k) {
    const auto& stop = text::StopwordList::builtin();
    std::vector<std::vector<std::string>> terms;
    std::map<std::string, int> freq;
    for (const auto& s : doc.sentences) {
        terms.emplace_back();
        for (const auto& t : text::tokenize(s.text).tokens) {
            if (!stop.contains(t.str())) {
                terms.back().push_back(t.str());
                ++freq[t.str()];
            }
        }
    }
    std::vector<double> score;
    for (const auto& ts : terms) {
        double sum = 0;
        for (const auto& t : ts) sum += freq[t];
        score.push_back(ts.empty() ? 0.0 : sum / ts.size());
    }
    std::vector<bool> chosen(score.size(), false);
    for (std::size_t round = 0; round < std::min(k, score.size()); ++round) {
        std::size_t best = score.size();
        for (std::size_t i = 0; i < score.size(); ++i) {
            if (!chosen[i] && (best == score.size() || score[i] > score[best])) best = i;
        }
        chosen[best] = true;
    }
    std::string out;
    for (std::size_t i = 0; i < score.size(); ++i) {
        if (!chosen[i]) continue;
        if (!out.empty()) out += ' ';
        out += doc.sentences[i].text;
    }
    return out;
}

std::string random_document(std::mt19937_64& rng) {
    static const std::vector<std::string> words = {"river", "bank", "money", "water", "flow", "the",
                                                   "a",     "loan",  "fish", "boat",  "and", "of"};
    std::string text;
    const int sentences = 1 + static_cast<int>(rng() % 12);
    for (int s = 0; s < sentences; ++s) {
        const int n = 1 + static_cast<int>(rng() % 9);
        for (int i = 0; i < n; ++i) {
            std::string w = words[rng() % words.size()];
            if (i == 0) w[0] = static_cast<char>(std::toupper(w[0]));
            text += w + (i + 1 == n ? ". " : " ");
        }
    }
    return text;
}

class FixedLlm final : public LlmClient {
public:
    explicit FixedLlm(std::string reply) : reply_(std::move(reply)) {}
    std::string complete(const std::string&) override {
        ++calls;
        return reply_;
    }
    HealthStatus healthcheck() override { return {}; }
    std::atomic<int> calls{0};

private:
    std::string reply_;
};

class FlakyLlm final : public LlmClient {
public:
    FlakyLlm(int failures, bool retryable) : failures_(failures), retryable_(retryable) {}
    std::string complete(const std::string&) override {
        if (++calls <= failures_) throw ProviderUnavailable("flaky", retryable_);
        return "fine";
    }
    HealthStatus healthcheck() override { return {}; }
    std::atomic<int> calls{0};

private:
    int failures_;
    bool retryable_;
};

std::string long_sentence(char fill, std::size_t len) {
    std::string s(len - 1, fill);
    for (std::size_t i = 7; i < s.size(); i += 8) s[i] = ' ';
    return s + ".";
}

}  // namespace

TEST_CASE("extractive summarizer picks the highest-scoring sentence") {
    const auto doc = doc_of("cat runs. cat sleeps. dog barks.");
    CHECK(extractive_summarize(doc, 1).text == "cat runs.");
    CHECK(extractive_summarize(doc, 2).text == "cat runs. cat sleeps.");
    CHECK(extractive_summarize(doc, 9).text == "cat runs. cat sleeps. dog barks.");
    CHECK(code_of([&] { (void)extractive_summarize(doc, 0); }) == ErrorCode::invalid_request);
}

TEST_CASE("extractive summaries match the selection oracle and are ordered subsequences") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 300; ++iter) {
        const auto doc = doc_of(random_document(rng));
        const std::size_t k = 1 + rng() % 6;
        const auto a = extractive_summarize(doc, k);
        const auto b = extractive_summarize(doc, k);
        CHECK(a.text == b.text);
        CHECK(a.text == oracle_extract(doc, k));

        std::size_t pos = 0;
        std::size_t count = 0;
        for (const auto& s : doc.sentences) {
            const auto at = a.text.find(s.text, pos);
            if (at == pos) {
                pos = at + s.text.size() + 1;
                ++count;
            }
        }
        CHECK(count == std::min(k, doc.sentences.size()));
    }
}

TEST_CASE("a single-chunk document costs one map and one reduce call") {
    testing::CountingLlm llm;
    const auto doc = doc_of("Rivers flow downhill. Banks hold money.");
    SummaryRequest req;
    req.backend = SummaryBackend::llm_chain;
    const auto s = llm_chain_summarize(doc, req, llm, {testing::no_sleep_retry()});
    CHECK(llm.calls() == 2);
    const auto prompts = llm.prompts();
    CHECK(prompts[0] == render_prompt(kDefaultMapPrompt, "Rivers flow downhill. Banks hold money."));
    CHECK(prompts[1] == render_prompt(kDefaultReducePrompt, "S:" + prompts[0]));
    CHECK(s.text == "S:" + prompts[1]);
    CHECK(s.backend == SummaryBackend::llm_chain);
    CHECK(s.params.document_id == doc.document_id);
}

TEST_CASE("n chunks cost n map calls plus one reduce") {
    testing::CountingLlm llm;
    const auto doc = doc_of(long_sentence('a', 150) + " " + long_sentence('b', 150));
    SummaryRequest req;
    req.backend = SummaryBackend::llm_chain;
    req.chunk_chars = 200;
    req.prompt_template_map = "m{text}";
    req.prompt_template_reduce = "R";
    req.chunk_chars = 400;
    CHECK(llm_chain_summarize(doc, req, llm, {testing::no_sleep_retry()}).text == "S:R");
    CHECK(llm.calls() == 2);
    req.chunk_chars = 200;
    req.prompt_template_map = "m";
    const auto s = llm_chain_summarize(doc, req, llm, {testing::no_sleep_retry()});
    CHECK(llm.calls() == 5);
    CHECK(s.text == "S:R");

    testing::CountingLlm many;
    std::string text;
    for (int i = 0; i < 9; ++i) text += long_sentence(static_cast<char>('a' + i), 150) + " ";
    (void)llm_chain_summarize(doc_of(text), req, many, {testing::no_sleep_retry()});
    CHECK(many.calls() == 10);
}

TEST_CASE("partials that overflow one prompt are reduced recursively") {
    FixedLlm llm(std::string(60, 'p'));
    std::string text;
    for (int i = 0; i < 10; ++i) text += long_sentence(static_cast<char>('a' + i), 150) + " ";
    SummaryRequest req;
    req.backend = SummaryBackend::llm_chain;
    req.chunk_chars = 200;
    const auto s = llm_chain_summarize(doc_of(text), req, llm, {testing::no_sleep_retry()});
    // 10 maps, groups of three -> 4, groups of three -> 2, final reduce.
    CHECK(llm.calls == 17);
    CHECK(s.text == std::string(60, 'p'));

    FixedLlm verbose(std::string(150, 'v'));
    CHECK(code_of([&] { (void)llm_chain_summarize(doc_of(text), req, verbose, {testing::no_sleep_retry()}); }) ==
          ErrorCode::reduce_depth_exceeded);
}

TEST_CASE("transient failures are retried with doubling backoff") {
    std::vector<std::chrono::milliseconds> waits;
    ChainOptions options;
    options.retry.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };
    const auto doc = doc_of("Only sentence.");
    SummaryRequest req;
    req.backend = SummaryBackend::llm_chain;

    testing::FailingLlm dead;
    try {
        (void)llm_chain_summarize(doc, req, dead, options);
        FAIL("expected ProviderUnavailable");
    } catch (const ProviderUnavailable& e) {
        CHECK(e.code() == ErrorCode::provider_unavailable);
    }
    CHECK(dead.calls == 3);
    CHECK(waits == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                          std::chrono::milliseconds(2000)});

    FlakyLlm flaky(2, true);
    CHECK(llm_chain_summarize(doc, req, flaky, options).text == "fine");
    CHECK(flaky.calls == 4);

    FlakyLlm fatal(1, false);
    CHECK(code_of([&] { (void)llm_chain_summarize(doc, req, fatal, options); }) == ErrorCode::provider_unavailable);
    CHECK(fatal.calls == 1);

    FixedLlm blank("  \n");
    CHECK(code_of([&] { (void)llm_chain_summarize(doc, req, blank, options); }) == ErrorCode::provider_contract);
}

TEST_CASE("run_summarizer validates its request") {
    const auto doc = doc_of("A sentence here. Another one there.");
    SummaryRequest req;
    req.backend = SummaryBackend::llm_chain;
    try {
        (void)run_summarizer(doc, req, nullptr, {}, {});
        FAIL("expected ProviderUnavailable");
    } catch (const ProviderUnavailable& e) {
        CHECK_FALSE(e.retryable());
    }
    testing::CountingLlm llm;
    req.chunk_chars = 50;
    CHECK(code_of([&] { (void)run_summarizer(doc, req, &llm, {}, {}); }) == ErrorCode::invalid_request);
    req.chunk_chars = 3000;
    req.document_id = "someone-else";
    CHECK(code_of([&] { (void)run_summarizer(doc, req, &llm, {}, {}); }) == ErrorCode::invalid_request);

    SummaryRequest ex;
    ex.target_sentences = 1;
    const auto s = run_summarizer(doc, ex, nullptr, {}, {});
    CHECK(s.backend == SummaryBackend::extractive);
    CHECK(s.params.target_sentences == 1);
    CHECK(s.params.document_id == doc.document_id);

    CHECK(parse_summary_backend("llm") == SummaryBackend::llm_chain);
    CHECK(parse_summary_backend("extractive") == SummaryBackend::extractive);
    CHECK(code_of([] { (void)parse_summary_backend("abstractive"); }) == ErrorCode::invalid_request);
    CHECK(render_prompt("<{text}|{text}>", "x") == "<x|x>");
}

TEST_CASE("HTTP LLM client speaks the completion wire contract") {
    testing::StubServer stub;
    nlohmann::json seen;
    stub.server().Post("/complete", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        res.set_content(R"({"text": "short summary"})", "application/json");
    });
    stub.server().Post("/wrong", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"completion": "x"})", "application/json");
    });
    stub.server().Post("/down", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    stub.start();

    HttpLlmClient ok({stub.url("/complete"), "tiny", std::chrono::milliseconds(2000)});
    CHECK(ok.complete("Summarize: x") == "short summary");
    CHECK(seen == nlohmann::json{{"model", "tiny"}, {"prompt", "Summarize: x"}});
    CHECK(ok.healthcheck().ok);

    HttpLlmClient wrong({stub.url("/wrong"), "tiny"});
    CHECK(code_of([&] { (void)wrong.complete("p"); }) == ErrorCode::provider_contract);
    CHECK_FALSE(wrong.healthcheck().ok);

    HttpLlmClient down({stub.url("/down"), "tiny"});
    try {
        (void)down.complete("p");
        FAIL("expected ProviderUnavailable");
    } catch (const ProviderUnavailable& e) {
        CHECK(e.retryable());
    }

    HttpLlmClient dead({testing::dead_url("/c"), "tiny", std::chrono::milliseconds(500)});
    CHECK(code_of([&] { (void)dead.complete("p"); }) == ErrorCode::provider_unavailable);
    CHECK(code_of([] { HttpLlmClient c(LlmClientConfig{}); }) == ErrorCode::invalid_request);
}
