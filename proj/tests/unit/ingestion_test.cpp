#include "doctest.h"

#include <filesystem>
#include <random>

#include "ase/error.hpp"
#include "ase/ingestion.hpp"
#include "test_support.hpp"

using namespace ase;
namespace fs = std::filesystem;

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

std::string sentence_of(std::size_t chars, char fill) {
    std::string s(chars - 1, fill);
    for (std::size_t i = 9; i < s.size(); i += 10) s[i] = ' ';
    return s + ".";
}

Document doc_of(const std::string& text) { return make_document("t", text, DocumentSource::inline_text, {}); }

fs::path script(const testing::TempDir& dir, const std::string& name, const std::string& body) {
    const auto p = dir / name;
    testing::write_file(p, "#!/bin/sh\n" + body);
    fs::permissions(p, fs::perms::owner_all);
    return p;
}

}  // namespace

TEST_CASE("make_document normalizes line endings and derives sentences") {
    const auto d = make_document("T", "One.\r\nTwo.\rThree.", DocumentSource::text_file, {});
    CHECK(d.text == "One.\nTwo.\nThree.");
    CHECK(d.sentences.size() == 3);
    CHECK(d.source == DocumentSource::text_file);
    CHECK_FALSE(d.document_id.empty());
    CHECK(d.document_id != make_document("T", "One.", DocumentSource::inline_text, {}).document_id);
    CHECK(code_of([] { (void)doc_of(" \n\t"); }) == ErrorCode::empty_text);
    CHECK(parse_document_source(to_string(DocumentSource::pdf_extractor)) == DocumentSource::pdf_extractor);
}

TEST_CASE("three 100-character sentences pack into two chunks at 250") {
    const std::string text = sentence_of(100, 'a') + " " + sentence_of(100, 'b') + " " + sentence_of(100, 'c');
    const auto doc = doc_of(text);
    REQUIRE(doc.sentences.size() == 3);
    const auto chunks = chunk_text(doc, 250);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].start_sentence == 0);
    CHECK(chunks[0].end_sentence == 2);
    CHECK(text::char_count(chunks[0].text) == 201);
    CHECK(chunks[1].start_sentence == 2);
    CHECK(chunks[1].end_sentence == 3);
    CHECK(chunks[1].index == 1);
}

TEST_CASE("an oversized sentence becomes its own chunk") {
    const auto doc = doc_of(sentence_of(5000, 'z'));
    const auto chunks = chunk_text(doc, 3000);
    REQUIRE(chunks.size() == 1);
    CHECK(text::char_count(chunks[0].text) == 5000);

    const auto mixed = doc_of("Short one. " + sentence_of(400, 'q') + " Short two.");
    const auto c2 = chunk_text(mixed, 200);
    REQUIRE(c2.size() == 3);
    CHECK(c2[1].text.size() == 400);
}

TEST_CASE("chunk_text rejects tiny limits") {
    CHECK(code_of([] { (void)chunk_text(doc_of("A b."), kMinChunkChars - 1); }) == ErrorCode::invalid_request);
}

TEST_CASE("chunks reconstruct the sentence stream on random documents") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        std::string text;
        const int n = 1 + static_cast<int>(rng() % 25);
        for (int i = 0; i < n; ++i) {
            const std::size_t len = 5 + rng() % 400;
            text += sentence_of(len, static_cast<char>('a' + rng() % 26)) + " ";
        }
        const auto doc = doc_of(text);
        const std::size_t limit = kMinChunkChars + rng() % 500;
        const auto chunks = chunk_text(doc, limit);
        std::string rebuilt;
        std::size_t next = 0;
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            const auto& c = chunks[i];
            CHECK(c.index == i);
            CHECK(c.start_sentence == next);
            CHECK(c.end_sentence > c.start_sentence);
            next = c.end_sentence;
            if (c.end_sentence - c.start_sentence > 1) CHECK(text::char_count(c.text) <= limit);
            if (!rebuilt.empty()) rebuilt += ' ';
            rebuilt += c.text;
        }
        CHECK(next == doc.sentences.size());
        CHECK(rebuilt == joined_sentences(doc));
    }
}

TEST_CASE("pdf extractor runs a command and captures stdout") {
    testing::TempDir dir;
    const auto pdf = dir / "in.pdf";
    testing::write_file(pdf, "%PDF-1.4 fake");
    const auto ok = script(dir, "ok.sh", "echo \"Hello from $1.\"\n");
    const auto out = run_pdf_extractor(pdf, {ok.string() + " {input}"});
    CHECK(out == "Hello from " + pdf.string() + ".\n");
}

TEST_CASE("pdf extractor failures carry stderr") {
    testing::TempDir dir;
    const auto pdf = dir / "in.pdf";
    testing::write_file(pdf, "x");
    const auto bad = script(dir, "bad.sh", "echo 'cannot parse' >&2\nexit 3\n");
    try {
        (void)run_pdf_extractor(pdf, {bad.string() + " {input}"});
        FAIL("expected ExtractorFailed");
    } catch (const ExtractorFailed& e) {
        CHECK(e.code() == ErrorCode::extractor_failed);
        CHECK(e.stderr_text().find("cannot parse") != std::string::npos);
    }

    const auto empty = script(dir, "empty.sh", "exit 0\n");
    CHECK(code_of([&] { (void)run_pdf_extractor(pdf, {empty.string() + " {input}"}); }) ==
          ErrorCode::extractor_failed);

    const auto slow = script(dir, "slow.sh", "sleep 5\necho late\n");
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(code_of([&] {
              (void)run_pdf_extractor(pdf, {slow.string() + " {input}", std::chrono::milliseconds(200)});
          }) == ErrorCode::extractor_failed);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(3));

    CHECK(code_of([&] { (void)run_pdf_extractor(dir / "missing.pdf", {"cat {input}"}); }) == ErrorCode::not_found);
    CHECK(code_of([&] { (void)run_pdf_extractor(pdf, {"  "}); }) == ErrorCode::invalid_request);
    CHECK(code_of([&] { (void)run_pdf_extractor(pdf, {"/nonexistent/extractor {input}"}); }) ==
          ErrorCode::extractor_failed);
}
