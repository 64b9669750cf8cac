#include <doctest.h>

#include <filesystem>
#include <random>

#include <json.hpp>

#include "sqt/errors/taxonomy.hpp"
#include "sqt/extract/extract.hpp"
#include "sqt/util/jsonl.hpp"

using namespace sqt;

namespace {

struct LoadedCase {
    std::string id;
    TranslationDirection direction;
    QueryDoc gold_source;
    QueryDoc gold_target;
    std::optional<QueryDoc> candidate;
    std::string candidate_text;
    Er2Doc er2;
    bool execution_error = false;
    bool candidate_empty = false;
    std::set<ErrorLabel> expected;
};

std::vector<LoadedCase> load_cases() {
    auto j = nlohmann::json::parse(
        read_file(std::string(SQT_FIXTURE_DIR) + "/errors/cases.json"));
    std::vector<LoadedCase> cases;
    for (const auto& c : j) {
        LoadedCase lc;
        lc.id = c.at("id");
        lc.direction = {builtin_profile(c.at("direction")[0]),
                        builtin_profile(c.at("direction")[1])};
        lc.gold_source = parse_query(c.at("gold_source"));
        lc.gold_target = parse_query(c.at("gold_target"));
        lc.candidate_text = sanitize(c.at("candidate"));
        if (!validate_candidate(lc.candidate_text)) {
            lc.candidate = parse_query(lc.candidate_text);
        }
        lc.er2 = parse_er2(c.at("er2").dump(), lc.direction.source.name,
                           lc.direction.target.name);
        lc.execution_error = c.value("execution_error", false);
        lc.candidate_empty = c.value("candidate_empty", false);
        for (const auto& l : c.at("expected"))
            lc.expected.insert(*error_label_from(l.get<std::string>()));
        cases.push_back(std::move(lc));
    }
    return cases;
}

std::set<ErrorLabel> run_prescreen(const LoadedCase& lc) {
    PrescreenInput input;
    input.gold_source_doc = &lc.gold_source;
    input.gold_target_doc = &lc.gold_target;
    input.candidate_doc = lc.candidate ? &*lc.candidate : nullptr;
    input.candidate_text = lc.candidate_text;
    input.er2 = &lc.er2;
    input.execution_error = lc.execution_error;
    input.candidate_empty = lc.candidate_empty;
    input.comparison_equal = false;
    return prescreen(input, lc.direction);
}

} // namespace

TEST_CASE("prescreen reproduces the hand-assigned labels on the 24-case fixture") {
    auto cases = load_cases();
    REQUIRE(cases.size() == 24);

    size_t exact_matches = 0;
    size_t multi_label = 0;
    std::set<ErrorLabel> covered;
    for (const auto& lc : cases) {
        CAPTURE(lc.id);
        auto got = run_prescreen(lc);
        CHECK(!got.empty());
        if (got == lc.expected) ++exact_matches;
        else {
            std::string got_s, want_s;
            for (auto l : got) got_s += to_string(l) + " ";
            for (auto l : lc.expected) want_s += to_string(l) + " ";
            CAPTURE(got_s);
            CAPTURE(want_s);
            CHECK(got == lc.expected);
        }
        if (lc.expected.size() > 1) ++multi_label;
        for (auto l : lc.expected) covered.insert(l);
    }
    CHECK(exact_matches >= 22);  // acceptance threshold
    CHECK(multi_label >= 6);
    CHECK(covered.size() == 8);  // every category appears at least once
}

TEST_CASE("prescreen determinism and non-empty guarantee") {
    auto cases = load_cases();
    for (const auto& lc : cases) {
        auto a = run_prescreen(lc);
        auto b = run_prescreen(lc);
        CHECK(a == b);
        CHECK(!a.empty());
    }
}

TEST_CASE("unparseable candidate always carries QueryBadFormed") {
    TranslationDirection direction{builtin_profile("DBpedia"), builtin_profile("Wikidata")};
    QueryDoc gold = parse_query(
        "SELECT ?x WHERE { ?x <http://www.wikidata.org/prop/direct/P57> "
        "<http://www.wikidata.org/entity/Q2001> }");
    PrescreenInput input;
    input.gold_source_doc = &gold;
    input.gold_target_doc = &gold;
    input.candidate_doc = nullptr;
    input.candidate_text = "not a query at all";
    auto labels = prescreen(input, direction);
    CHECK(labels.count(ErrorLabel::QueryBadFormed) == 1);
}

TEST_CASE("merge: manual labels take precedence, heuristic preserved in notes") {
    Annotation heuristic{"run-7", {ErrorLabel::StructuralError},
                         AnnotationSource::Heuristic, "", "", ""};
    Annotation manual{"run-7",
                      {ErrorLabel::WrongOrMissingEntity, ErrorLabel::StructuralError},
                      AnnotationSource::Manual, "judged by reviewer", "rev1", ""};

    Annotation merged = merge_annotations(heuristic, manual);
    CHECK(merged.source == AnnotationSource::Merged);
    CHECK(merged.labels == manual.labels);
    CHECK(merged.notes.find("heuristic: [StructuralError]") != std::string::npos);
    CHECK(merged.notes.find("judged by reviewer") != std::string::npos);

    Annotation untouched = merge_annotations(heuristic, std::nullopt);
    CHECK(untouched.labels == heuristic.labels);
    CHECK(untouched.source == AnnotationSource::Heuristic);

    Annotation wrong_id = manual;
    wrong_id.run_id = "run-8";
    CHECK_THROWS_AS(merge_annotations(heuristic, wrong_id), IdMismatch);
}

TEST_CASE("co-occurrence matrix equals quadratic brute-force tally") {
    std::mt19937_64 rng(31);
    std::vector<Annotation> annotations;
    for (int i = 0; i < 20; ++i) {
        Annotation a;
        a.run_id = "run-" + std::to_string(i);
        size_t count = 1 + rng() % 4;
        while (a.labels.size() < count)
            a.labels.insert(kAllErrorLabels[rng() % kAllErrorLabels.size()]);
        annotations.push_back(std::move(a));
    }

    auto m = cooccurrence_matrix(annotations);

    // independent quadratic pair enumeration
    for (ErrorLabel a : kAllErrorLabels) {
        for (ErrorLabel b : kAllErrorLabels) {
            size_t expected = 0;
            for (const auto& ann : annotations)
                if (ann.labels.count(a) && ann.labels.count(b)) ++expected;
            CHECK(m.count(a, b) == expected);
        }
    }
}

TEST_CASE("co-occurrence percentages on constructed fixtures") {
    std::vector<Annotation> annotations;
    for (int i = 0; i < 4; ++i) {
        Annotation a;
        a.run_id = "m" + std::to_string(i);
        a.labels = {ErrorLabel::MissingTypeAssertion, ErrorLabel::StructuralError};
        annotations.push_back(a);
    }
    Annotation single{"s", {ErrorLabel::StructuralError}, AnnotationSource::Heuristic, "", "", ""};
    annotations.push_back(single);

    auto m = cooccurrence_matrix(annotations);
    CHECK(m.percentage(ErrorLabel::MissingTypeAssertion, ErrorLabel::StructuralError) ==
          doctest::Approx(100.0));
    CHECK(m.percentage(ErrorLabel::StructuralError, ErrorLabel::MissingTypeAssertion) ==
          doctest::Approx(80.0));
    CHECK(m.count(ErrorLabel::StructuralError, ErrorLabel::StructuralError) == 5);

    // single-label annotations only: off-diagonal zeros
    auto solo = cooccurrence_matrix({single});
    for (ErrorLabel b : kAllErrorLabels)
        if (b != ErrorLabel::StructuralError)
            CHECK(solo.count(ErrorLabel::StructuralError, b) == 0);
}

TEST_CASE("annotation sidecar round-trips") {
    auto path = (std::filesystem::temp_directory_path() / "sqt_annotations.jsonl").string();
    std::vector<Annotation> annotations = {
        {"run-1", {ErrorLabel::StructuralError, ErrorLabel::QueryBadFormed},
         AnnotationSource::Heuristic, "note", "auto", "2025-01-01T00:00:00Z"},
        {"run-2", {ErrorLabel::WrongOrMissingEntity}, AnnotationSource::Manual,
         "", "rev1", "2025-01-02T00:00:00Z"},
    };
    save_annotations(path, annotations);
    auto loaded = load_annotations(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].labels == annotations[0].labels);
    CHECK(loaded[1].source == AnnotationSource::Manual);
    CHECK(loaded[1].annotator == "rev1");
    std::filesystem::remove(path);
}

TEST_CASE("display labels are direction aware") {
    const auto& wd = builtin_profile("Wikidata");
    const auto& dbp = builtin_profile("DBpedia");
    CHECK(display_label(ErrorLabel::MissingTypeAssertion, wd) == "Missing P31");
    CHECK(display_label(ErrorLabel::MissingTypeAssertion, dbp) == "Missing rdf:type");
    CHECK(display_label(ErrorLabel::PropertyAsEntity, wd) == "Property Treated as Entity");
    CHECK(display_label(ErrorLabel::PropertyAsEntity, dbp) == "Ontology Treated as Resource");
    CHECK(display_label(ErrorLabel::WrongOrMissingEntity, dbp) == "Wrong or Missing Resource");
    CHECK(display_label(ErrorLabel::StructuralError, wd) == "Structural Error");
}
