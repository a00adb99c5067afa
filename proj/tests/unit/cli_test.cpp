#include "doctest.h"

#include <sstream>
#include <thread>

#include "ase/serialization.hpp"
#include "ase/service.hpp"
#include "cli.hpp"
#include "test_support.hpp"

using namespace ase;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "", char** env = nullptr) {
    args.insert(args.begin(), "ase");
    std::istringstream in(stdin_text);
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, in, out, err, env);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string kText = "The water cycle moves water between oceans and air. Heat from the sun evaporates it. "
                          "Vapour cools into clouds. Rain carries it back.";

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"score", "--doc", "d"}).code == 2);
    CHECK(run({"score", "--doc", "d", "--summary", "s"}).code == 2);
    CHECK(run({"ingest", "--title", "x"}).code == 2);
    CHECK(run({"ingest", "--text", "a", "--pdf", "b"}).code == 2);
    CHECK(run({"--format", "xml", "health"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("benchmark") != std::string::npos);
}

TEST_CASE("identity pipeline prints 100.00%") {
    testing::TempDir dir;
    const std::string store = (dir / "store").string();
    testing::write_file(dir / "doc.txt", kText);
    testing::write_file(dir / "u.txt", kText);

    const auto ing = run({"--store", store, "ingest", "--title", "Water", "--text-file", (dir / "doc.txt").string()});
    REQUIRE(ing.code == 0);
    const std::string doc = first_line(ing.out);
    const auto sum = run({"--store", store, "summarize", "--doc", doc, "--target-sentences", "10"});
    REQUIRE(sum.code == 0);
    const std::string summary = first_line(sum.out);
    const auto sc = run({"--store", store, "score", "--doc", doc, "--summary", summary, "--understanding-file",
                         (dir / "u.txt").string()});
    CHECK(sc.code == 0);
    CHECK(sc.out.find("Comprehension: 100.00% (strong") != std::string::npos);
    CHECK(sc.out.find("Cosine Similarity Score") != std::string::npos);
    CHECK(sc.out.find("Bert-Based Embeddings") != std::string::npos);

    const auto piped = run({"--store", store, "score", "--doc", doc, "--summary", summary, "--understanding", "-"}, kText);
    CHECK(piped.out.find("100.00%") != std::string::npos);
}

TEST_CASE("domain errors exit 1 with their code") {
    testing::TempDir dir;
    const std::string store = (dir / "store").string();
    auto r = run({"--store", store, "benchmark", "--corpus", (dir / "missing.jsonl").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("not_found") != std::string::npos);
    r = run({"--store", store, "summarize", "--doc", "nope"});
    CHECK(r.code == 1);
    CHECK(r.err.find("not_found") != std::string::npos);
    r = run({"--store", store, "ingest", "--text", "   "});
    CHECK(r.code == 1);
    CHECK(r.err.find("empty_text") != std::string::npos);
    r = run({"--store", store, "--set", "colour=blue", "health"});
    CHECK(r.code == 1);
    CHECK(r.err.find("invalid_request") != std::string::npos);

    const std::string doc = first_line(run({"--store", store, "ingest", "--text", "Some text."}).out);
    const std::string sum = first_line(run({"--store", store, "summarize", "--doc", doc}).out);
    r = run({"--store", store, "score", "--doc", doc, "--summary", sum, "--understanding", "..."});
    CHECK(r.code == 1);
    CHECK(r.err.find("empty_understanding") != std::string::npos);
    r = run({"--store", store, "summarize", "--doc", doc, "--summarizer", "llm_chain"});
    CHECK(r.code == 1);
    CHECK(r.err.find("provider_unavailable") != std::string::npos);
}

TEST_CASE("json output round-trips through the record schema") {
    testing::TempDir dir;
    const std::string store = (dir / "store").string();
    const auto ing = run({"--store", store, "--format", "json", "ingest", "--text", kText});
    REQUIRE(ing.code == 0);
    const auto doc = Json::parse(ing.out).get<Document>();
    const auto sum = Json::parse(run({"--store", store, "--format", "json", "summarize", "--doc", doc.document_id}).out)
                         .get<Summary>();
    const auto sc = run({"--store", store, "--format", "json", "score", "--doc", doc.document_id, "--summary",
                         sum.summary_id, "--understanding", "clouds and rain"});
    REQUIRE(sc.code == 0);
    const auto attempt = Json::parse(sc.out).get<Attempt>();
    Store s(store);
    CHECK(s.get_document(doc.document_id) == doc);
    CHECK(s.get_summary(sum.summary_id) == sum);
    CHECK(s.get_attempt(attempt.attempt_id) == attempt);
}

TEST_CASE("CLI and API score identical inputs identically") {
    testing::TempDir dir;
    Config config;
    config.store_root = dir / "store";
    config.embedding.dimension = 48;
    const std::string store = config.store_root.string();

    Engine engine(config);
    HttpService service(engine);
    const int port = service.bind_to_any_port("127.0.0.1");
    std::thread t([&] { service.listen_after_bind(); });
    service.wait_until_ready();
    httplib::Client client("127.0.0.1", port);

    const auto doc = Json::parse(client.Post("/api/documents", Json{{"text", kText}}.dump(), "application/json")->body);
    const std::string doc_id = doc.at("document_id");
    const auto sum = Json::parse(
        client.Post("/api/documents/" + doc_id + "/summaries", Json{{"target_sentences", 2}}.dump(), "application/json")
            ->body);
    const std::string sum_id = sum.at("summary_id");
    const std::string understanding = "Sun heat evaporates ocean water, which becomes clouds and then rain.";
    const auto api = Json::parse(client.Post("/api/documents/" + doc_id + "/attempts",
                                             Json{{"summary_id", sum_id}, {"understanding_text", understanding}}.dump(),
                                             "application/json")
                                     ->body)
                         .at("attempt")
                         .get<Attempt>();
    service.stop();
    t.join();

    const auto cli = run({"--store", store, "--embedding-dim", "48", "--format", "json", "score", "--doc", doc_id,
                          "--summary", sum_id, "--understanding", understanding});
    REQUIRE(cli.code == 0);
    const auto via_cli = Json::parse(cli.out).get<Attempt>();
    CHECK(via_cli.breakdown == api.breakdown);
    CHECK(via_cli.comprehension_percent == api.comprehension_percent);
    CHECK(via_cli.attempt_id != api.attempt_id);
}

TEST_CASE("benchmark writes the table and a report file") {
    testing::TempDir dir;
    testing::write_file(dir / "c.jsonl", "{\"id\":\"a\",\"text\":\"Cats sleep. Dogs bark.\",\"understanding\":\"cats sleep\"}\n"
                                         "{\"id\":\"b\",\"text\":\"Fish swim.\",\"understanding\":\"fish swim\"}\n");
    const auto r = run({"--store", (dir / "store").string(), "benchmark", "--corpus", (dir / "c.jsonl").string(),
                        "--out", (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("S.NO.  Similarity Metrics         Score\n", 0) == 0);
    CHECK(r.out.find("4      Bert-Based Embeddings") != std::string::npos);
    const auto report = Json::parse(testing::read_file(dir / "out" / "benchmark_report.json"));
    CHECK(report.at("entry_count") == 2);
    CHECK(report.at("excluded_count") == 0);
}

TEST_CASE("config file, environment and flags layer in that order") {
    testing::TempDir dir;
    testing::write_file(dir / "c.json", Json{{"store_root", (dir / "from-file").string()}}.dump());
    auto r = run({"--config", (dir / "c.json").string(), "ingest", "--text", "A."});
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "from-file" / "documents"));

    std::string env_store = "ASE_STORE_ROOT=" + (dir / "from-env").string();
    char* env[] = {env_store.data(), nullptr};
    r = run({"--config", (dir / "c.json").string(), "ingest", "--text", "A."}, "", env);
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "from-env" / "documents"));

    r = run({"--config", (dir / "c.json").string(), "--store", (dir / "from-flag").string(), "ingest", "--text", "A."},
            "", env);
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "from-flag" / "documents"));
}

TEST_CASE("health lists each dependency") {
    testing::TempDir dir;
    const auto r = run({"--store", (dir / "s").string(), "--format", "json", "health"});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j.at("store").at("status") == "ok");
    CHECK(j.at("embedding").at("status") == "ok");
    CHECK(j.at("llm").at("status") == "error");
}
