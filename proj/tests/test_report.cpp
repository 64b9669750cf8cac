#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <regex>

#include <json.hpp>

#include "sqt/report/emit.hpp"
#include "sqt/report/pipeline.hpp"
#include "sqt/report/tables.hpp"
#include "sqt/util/jsonl.hpp"
#include "support/stub_servers.hpp"

using namespace sqt;

namespace {

const std::string kFixtures = SQT_FIXTURE_DIR;

void load_stub_map(testing::StubSparqlServer& server) {
    auto map = nlohmann::json::parse(read_file(kFixtures + "/bench/stub_endpoint.json"));
    for (const auto& [query, response] : map.items())
        server.add_canned(query, response.dump());
}

RunConfig fixture_config(const std::string& out_dir) {
    RunConfig cfg;
    cfg.manifest_path = kFixtures + "/bench/manifest_10.json";
    cfg.directions = {{"DBpedia", "Wikidata"}};
    cfg.models = {"stub-model"};
    cfg.strategies = {Strategy::FewShotER, Strategy::ZeroShotER};
    cfg.seed = 20250808;
    cfg.exemplar_pool_path = kFixtures + "/exemplars/pool.json";
    cfg.exemplar_vectors_path = kFixtures + "/exemplars/vectors_12.txt";
    cfg.cassette_path = kFixtures + "/llm/cassette_10x2.jsonl";
    cfg.cassette_mode = CassetteMode::Replay;
    cfg.parallelism = 4;
    cfg.out_dir = out_dir;
    cfg.exec_timeout_s = 5;
    return cfg;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

struct EndpointGuard {
    EndpointGuard(const std::string& name, const std::string& url)
        : var("SPARQL_ENDPOINT_" + name) {
        setenv(var.c_str(), url.c_str(), 1);
    }
    ~EndpointGuard() { unsetenv(var.c_str()); }
    std::string var;
};

std::map<std::string, AccuracyRow> rows_by_strategy(const AccuracyTable& table) {
    std::map<std::string, AccuracyRow> out;
    for (const auto& row : table.rows) out[row.strategy] = row;
    return out;
}

} // namespace

TEST_CASE("end-to-end replay: bit-identical digests and the fixture accuracy") {
    auto start = std::chrono::steady_clock::now();

    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir1("sqt_run1"), dir2("sqt_run2");
    auto first = run_pipeline(fixture_config(dir1.path.string()));
    auto second = run_pipeline(fixture_config(dir2.path.string()));

    CHECK(first.records.size() == 20);  // 10 items x 2 strategies x 1 model x 1 direction
    CHECK(first.record_digest == second.record_digest);

    auto table = accuracy_table(first.records);
    auto rows = rows_by_strategy(table);
    REQUIRE(rows.count("FewShotER"));
    REQUIRE(rows.count("ZeroShotER"));
    CHECK(rows["FewShotER"].correct == 8);
    CHECK(rows["FewShotER"].incorrect == 2);
    CHECK(rows["ZeroShotER"].correct == 5);
    CHECK(rows["ZeroShotER"].incorrect == 5);
    for (const auto& [name, row] : rows) CHECK(row.n() == 10);

    // accounting + label invariants
    CHECK(table.total_correct() + table.total_incorrect() == 20);
    for (const auto& r : first.records) {
        if (r.correct) CHECK(r.error_labels.empty());
        else CHECK(!r.error_labels.empty());
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - start);
    CHECK(elapsed.count() < 60);
}

TEST_CASE("resumability: a second run over the same out_dir recomputes nothing") {
    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir("sqt_resume");
    auto first = run_pipeline(fixture_config(dir.path.string()));
    CHECK(first.new_completions == 20);
    CHECK(first.resumed == 0);

    auto second = run_pipeline(fixture_config(dir.path.string()));
    CHECK(second.new_completions == 0);
    CHECK(second.resumed == 20);
    CHECK(second.record_digest == first.record_digest);
}

TEST_CASE("failure log covers exactly the failed extractions and validations") {
    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir("sqt_faillog");
    auto result = run_pipeline(fixture_config(dir.path.string()));

    size_t extraction_failures = 0, validation_failures = 0;
    for (const auto& r : result.records) {
        if (r.failure_stage == "extraction") ++extraction_failures;
        if (r.failure_stage == "validation") ++validation_failures;
    }
    auto entries = FailureLog::load(dir.path.string() + "/failures.jsonl");
    CHECK(entries.size() == extraction_failures + validation_failures);
    CHECK(extraction_failures == 2);  // the two refusals
    CHECK(validation_failures == 2);  // the two truncated tags

    // raw outputs persisted for every completed cell
    size_t raw_files = 0;
    for (auto& p : std::filesystem::directory_iterator(dir.path / "raw")) {
        (void)p;
        ++raw_files;
    }
    CHECK(raw_files >= 15);  // distinct outputs (identical completions dedupe)
}

TEST_CASE("classify records and report tables have the documented shape") {
    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir("sqt_tables");
    auto result = run_pipeline(fixture_config(dir.path.string()));
    auto manifest = load_manifest(kFixtures + "/bench/manifest_10.json");

    // heuristic annotations straight from the records
    std::vector<Annotation> annotations;
    for (const auto& r : result.records) {
        if (r.correct) continue;
        annotations.push_back({r.cell_key(), r.error_labels,
                               AnnotationSource::Heuristic, "", "", ""});
    }
    CHECK(annotations.size() == 7);

    auto report = error_report(annotations, result.records, manifest);
    REQUIRE(report.directions.size() == 1);
    CHECK(report.directions[0] == "DBpedia->Wikidata");
    REQUIRE(report.distribution.size() == 8);  // eight rows, fixed order
    CHECK(report.distribution[0].label == ErrorLabel::StructuralError);
    CHECK(report.distribution[3].label == ErrorLabel::QueryBadFormed);

    size_t sum = 0;
    for (const auto& row : report.distribution)
        sum += row.count_by_direction.at("DBpedia->Wikidata");
    CHECK(sum == report.total_by_direction.at("DBpedia->Wikidata"));

    // co-occurrence equals the brute-force tally
    const auto& m = report.cooccurrence_by_direction.at("DBpedia->Wikidata");
    for (ErrorLabel a : kAllErrorLabels) {
        for (ErrorLabel b : kAllErrorLabels) {
            size_t expected = 0;
            for (const auto& ann : annotations)
                if (ann.labels.count(a) && ann.labels.count(b)) ++expected;
            CHECK(m.count(a, b) == expected);
        }
    }

    // category means are averages over annotated runs
    const auto& stats = report.category_stats.at("DBpedia->Wikidata");
    size_t runs = 0;
    for (const auto& [category, stat] : stats) runs += stat.runs;
    CHECK(runs == annotations.size());
}

TEST_CASE("emitters are byte-deterministic and proportional") {
    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir("sqt_emit");
    auto result = run_pipeline(fixture_config(dir.path.string()));
    auto manifest = load_manifest(kFixtures + "/bench/manifest_10.json");
    auto table = accuracy_table(result.records);

    std::vector<Annotation> annotations;
    for (const auto& r : result.records)
        if (!r.correct)
            annotations.push_back({r.cell_key(), r.error_labels,
                                   AnnotationSource::Heuristic, "", "", ""});
    auto report = error_report(annotations, result.records, manifest);

    // identical inputs -> identical bytes
    CHECK(emit_accuracy_csv(table) == emit_accuracy_csv(table));
    CHECK(emit_accuracy_svg(table, "DBpedia->Wikidata") ==
          emit_accuracy_svg(table, "DBpedia->Wikidata"));
    CHECK(emit_error_csv(report) == emit_error_csv(report));

    // csv shape: one line per row plus header
    auto csv = emit_accuracy_csv(table);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + table.rows.size());

    // svg bar heights proportional to correct counts
    auto svg = emit_accuracy_svg(table, "DBpedia->Wikidata");
    std::regex bar_re(
        "<rect class=\"bar\"[^>]*data-correct=\"(\\d+)\"[^>]*height=\"([0-9.]+)\"");
    double ratio = -1.0;
    size_t bars = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar_re);
         it != std::sregex_iterator(); ++it) {
        double correct = std::stod((*it)[1]);
        double height = std::stod((*it)[2]);
        ++bars;
        if (correct == 0) {
            CHECK(height == doctest::Approx(0.0).epsilon(0.01));
            continue;
        }
        double r = height / correct;
        if (ratio < 0) ratio = r;
        CHECK(r == doctest::Approx(ratio).epsilon(0.01));
    }
    CHECK(bars == 2);  // one bar per strategy in the single-model fixture

    // emit_outputs writes the requested files under out_dir
    auto files = emit_outputs(table, report,
                              {OutputFormat::Text, OutputFormat::Csv, OutputFormat::Svg},
                              (dir.path / "reports").string());
    CHECK(files.size() == 7);
    for (const auto& f : files) CHECK(file_exists(f));
}

TEST_CASE("shipped manifest invariants") {
    auto manifest = load_manifest(kFixtures + "/bench/manifest_10.json");
    CHECK(manifest.count() == 10);
    for (const auto& item : manifest.items) {
        for (const auto& [kg, q] : item.query_by_kg)
            CHECK(validate_syntax(q).empty());  // 100% of gold queries parse
        for (const auto& [kg, rs] : item.gold_by_kg) {
            if (rs.kind == ResultSet::Kind::Bindings) CHECK(!rs.rows.empty());
        }
        REQUIRE(item.category.has_value());
        CHECK(is_known_category(*item.category));
    }
}

TEST_CASE("run config file round-trips through the loader") {
    auto cfg = load_run_config(kFixtures + "/bench/run_config.json");
    CHECK(cfg.manifest_path == "fixtures/bench/manifest_10.json");
    REQUIRE(cfg.directions.size() == 1);
    CHECK(cfg.directions[0].first == "DBpedia");
    CHECK(cfg.strategies.size() == 2);
    CHECK(cfg.cassette_mode == CassetteMode::Replay);
    CHECK(cfg.seed == 20250808);
}

TEST_CASE("records round-trip and digest ignores timings") {
    testing::StubSparqlServer server;
    load_stub_map(server);
    EndpointGuard wd("WIKIDATA", server.url());

    TempDir dir("sqt_records");
    auto result = run_pipeline(fixture_config(dir.path.string()));

    auto loaded = load_records(dir.path.string() + "/records.jsonl");
    CHECK(records_digest(loaded) == result.record_digest);

    auto tweaked = loaded;
    for (auto& r : tweaked) r.total_ms += 12345;
    CHECK(records_digest(tweaked) == result.record_digest);

    auto mutated = loaded;
    mutated[0].correct = !mutated[0].correct;
    CHECK(records_digest(mutated) != result.record_digest);
}
