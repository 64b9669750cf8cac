#include <doctest.h>

#include <filesystem>
#include <random>

#include <json.hpp>

#include "sqt/extract/extract.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/sha256.hpp"

using namespace sqt;

namespace {

nlohmann::json load_corpus() {
    return nlohmann::json::parse(
        read_file(std::string(SQT_FIXTURE_DIR) + "/extraction/corpus.json"));
}

// Random raw outputs: printable junk, keywords, tags and fences mixed so the
// chain sees realistic garbage, plus raw bytes for the lenient-decoding side.
std::string random_raw(std::mt19937_64& rng) {
    static const char* fragments[] = {
        "SELECT", "ask", "WHERE", "{", "}", "<sparql>", "</sparql>", "```",
        "```sparql\n", "?x", "<http://example.org/p>", "\"literal", "PREFIX",
        "wd:Q42", "<think>", "</think>", "\n", " ", "\t", "#comment", "'",
        "\"\"\"", "FILTER(", ")", ".", ";", ",", "a", "<", ">", "\\",
    };
    std::string out;
    size_t pieces = rng() % 40;
    for (size_t i = 0; i < pieces; ++i) {
        if (rng() % 5 == 0) {
            out += char(rng() % 256);  // arbitrary byte
        } else {
            out += fragments[rng() % (sizeof(fragments) / sizeof(fragments[0]))];
        }
    }
    return out;
}

} // namespace

TEST_CASE("extraction corpus: labels agree 100%") {
    auto corpus = load_corpus();
    REQUIRE(corpus.size() >= 30);

    size_t mismatches = 0;
    for (const auto& c : corpus) {
        std::string id = c["id"];
        std::string raw = c["raw"];
        const auto& expect = c["expect"];
        CAPTURE(id);

        ExtractionResult res = extract_candidate(raw);
        std::string status = res.extracted() ? "extracted" : "failed";
        if (status != expect["status"].get<std::string>()) {
            ++mismatches;
            CHECK(status == expect["status"].get<std::string>());
            continue;
        }
        if (res.extracted()) {
            CHECK(to_string(*res.method) == expect["method"].get<std::string>());

            std::string clean = sanitize(*res.query_text);
            auto verdict = validate_candidate(clean);
            CHECK(!verdict.has_value() == expect["valid"].get<bool>());
            if (expect.contains("reason") && verdict)
                CHECK(*verdict == expect["reason"].get<std::string>());
            if (expect.contains("contains"))
                CHECK(clean.find(expect["contains"].get<std::string>()) !=
                      std::string::npos);
            if (expect.contains("sanitized"))
                CHECK(clean == expect["sanitized"].get<std::string>());
        } else {
            CHECK(res.failure_reason == expect["reason"].get<std::string>());
            CHECK_FALSE(expect["valid"].get<bool>());
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("tag priority beats fences on crafted fixtures") {
    std::string raw =
        "```\nSELECT ?fence WHERE { ?fence <http://p> ?o }\n```"
        "<sparql>SELECT ?tag WHERE { ?tag <http://p> ?o }</sparql>";
    auto res = extract_candidate(raw);
    REQUIRE(res.extracted());
    CHECK(*res.method == ExtractionMethod::SparqlTag);
    CHECK(res.query_text->find("?tag") != std::string::npos);
}

TEST_CASE("unclosed tag takes the remainder and is flagged") {
    auto res = extract_candidate("<sparql>SELECT ?x WHERE { ?x <http://p> ?o }");
    REQUIRE(res.extracted());
    CHECK(*res.method == ExtractionMethod::SparqlTag);
    CHECK(res.tag_unclosed);
    CHECK_FALSE(validate_candidate(sanitize(*res.query_text)).has_value());
}

TEST_CASE("sanitize: whitespace collapse preserves literals") {
    std::string messy = "SELECT   ?x\n\nWHERE { ?x <http://p> \"a  b\" }";
    CHECK(sanitize(messy) == "SELECT ?x WHERE { ?x <http://p> \"a  b\" }");
}

TEST_CASE("sanitize: strips stray think markup") {
    CHECK(sanitize("</think> SELECT ?x WHERE { ?x <http://p> ?o }") ==
          "SELECT ?x WHERE { ?x <http://p> ?o }");
    CHECK(sanitize("<think>planning...</think>ASK { <http://s> <http://p> <http://o> }") ==
          "ASK { <http://s> <http://p> <http://o> }");
}

TEST_CASE("sanitize: already-clean query unchanged") {
    std::string clean = "SELECT ?x WHERE { ?x <http://p> ?o }";
    CHECK(sanitize(clean) == clean);
}

TEST_CASE("sanitize is idempotent on the corpus and on random inputs") {
    auto corpus = load_corpus();
    for (const auto& c : corpus) {
        std::string once = sanitize(c["raw"].get<std::string>());
        CHECK(sanitize(once) == once);
    }
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        std::string raw = random_raw(rng);
        std::string once = sanitize(raw);
        CHECK(sanitize(once) == once);
    }
}

TEST_CASE("validate_candidate reasons") {
    CHECK(*validate_candidate("WHERE { ?x ?p ?o }") == "missing_query_form");
    CHECK(*validate_candidate("SELECT ?x") == "missing_where");
    CHECK(*validate_candidate("SELECT WHERE { ?x <http://p> ?o }") ==
          "missing_projection");
    CHECK(*validate_candidate("SELECT * WHERE { ?x <http://p> ?o") ==
          "unbalanced_group");
    CHECK_FALSE(validate_candidate("SELECT * WHERE { ?x <http://p> ?o }").has_value());
}

TEST_CASE("fuzz: 10000 random inputs never raise through the chain") {
    std::mt19937_64 rng(20250808);
    for (int i = 0; i < 10000; ++i) {
        std::string raw = random_raw(rng);
        CAPTURE(i);
        REQUIRE_NOTHROW([&] {
            auto res = extract_candidate(raw);
            if (res.extracted()) {
                std::string clean = sanitize(*res.query_text);
                (void)validate_candidate(clean);
            }
        }());
    }
}

TEST_CASE("failure log round-trips entries") {
    auto path = (std::filesystem::temp_directory_path() / "sqt_failure_log.jsonl").string();
    std::filesystem::remove(path);

    FailureLog log(path);
    log.append({"run-1", sha256_hex("raw a"), "extraction", "no_query_material"});
    log.append({"run-2", sha256_hex("raw b"), "validation", "missing_where"});

    auto entries = FailureLog::load(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].run_id == "run-1");
    CHECK(entries[0].stage == "extraction");
    CHECK(entries[1].reason == "missing_where");
    std::filesystem::remove(path);
}
