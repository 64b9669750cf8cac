// Regenerates the shipped fixtures that depend on deterministic rendering:
// golden prompt files and the end-to-end manifest/cassette/stub data. Run
// from the repository root after intentional prompt or digest changes, then
// review the diff before committing.

#include <cstdlib>
#include <iostream>
#include <string>

#include <json.hpp>

#include "../tests/support/kubrick_spec.hpp"
#include "../tests/support/stub_servers.hpp"
#include "sqt/bench/ingest.hpp"
#include "sqt/llm/client.hpp"
#include "sqt/prompt/prompt.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/sha256.hpp"

using namespace sqt;

namespace {

constexpr uint64_t kFixtureSeed = 20250808;
constexpr const char* kModel = "stub-model";

void write_golden_prompts(const std::string& fixture_dir) {
    const Strategy all[] = {Strategy::ZeroShot, Strategy::ZeroShotER,
                            Strategy::FewShotER, Strategy::CoT, Strategy::CoTTags};
    for (Strategy s : all) {
        auto spec = testing::kubrick_spec(s, fixture_dir);
        auto rendered = render_prompt(spec);
        std::string path =
            fixture_dir + "/prompts/golden/" + to_string(s) + ".txt";
        write_file(path, rendered.text);
        std::cout << "wrote " << path << " (digest " << rendered.spec_digest << ")\n";
    }
}

std::string one_row_response(const std::string& id, const std::string& kg) {
    nlohmann::ordered_json j;
    j["head"]["vars"] = {"v"};
    j["results"]["bindings"] = {{{"v", {{"type", "uri"},
                                        {"value", "http://example.org/row/" + id +
                                                      "/" + kg}}}}};
    return j.dump();
}

// The ten-item replay fixture: a manifest built through the normal pipeline
// against an in-process endpoint, plus the canned endpoint map and the
// cassette holding every completion for stub-model x {FewShotER, ZeroShotER}.
void write_e2e_fixtures(const std::string& fixture_dir) {
    auto pool_manifest = load_manifest(fixture_dir + "/exemplars/pool.json");

    // raw items q01..q12 reuse the pool's aligned query pairs
    std::vector<RawItem> raw;
    std::map<std::string, std::string> pool_id_of;
    for (size_t i = 0; i < pool_manifest.items.size(); ++i) {
        const auto& p = pool_manifest.items[i];
        RawItem item;
        char id[8];
        std::snprintf(id, sizeof(id), "q%02zu", i + 1);
        item.id = id;
        item.nlq = p.nlq;
        item.query_by_kg = p.query_by_kg;
        pool_id_of[item.id] = p.id;
        raw.push_back(std::move(item));
    }

    std::map<std::string, std::string> canned;  // collapsed query -> response
    testing::StubSparqlServer server;
    for (const auto& item : raw) {
        for (const auto& [kg, query] : item.query_by_kg) {
            std::string response = one_row_response(item.id, kg);
            canned[testing::query_key(query)] = response;
            server.add_canned(query, response);
        }
    }
    setenv("SPARQL_ENDPOINT_DBPEDIA", server.url().c_str(), 1);
    setenv("SPARQL_ENDPOINT_WIKIDATA", server.url().c_str(), 1);

    BuildOptions options;
    options.target_n = 10;
    options.seed = kFixtureSeed;
    for (int i = 1; i <= 10; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "q%02d", i);
        options.include_ids.push_back(id);
    }
    options.name = "fixture-10";
    options.source_split = "fixture";
    options.snapshot_note = "gold answers snapshotted from the canned stub endpoint";

    SparqlClient client({std::chrono::seconds(5), 1, std::chrono::milliseconds(5)});
    DatasetManifest manifest = build_benchmark(raw, builtin_profiles(), client, options);
    unsetenv("SPARQL_ENDPOINT_DBPEDIA");
    unsetenv("SPARQL_ENDPOINT_WIKIDATA");

    // er2 per item, copied from the pool entries the items derive from
    for (auto& item : manifest.items) {
        const auto* pool_item = pool_manifest.find(pool_id_of.at(item.id));
        auto er2 = pool_item->er2_by_direction.find("DBpedia->Wikidata");
        if (er2 != pool_item->er2_by_direction.end())
            item.er2_by_direction["DBpedia->Wikidata"] = er2->second;
    }

    std::string categories =
        "q01\tAggregated List\n"
        "q02\tSingle Person\n"
        "q03\tComprehensive List\n"
        "q04\tSingle Fact\n"
        "q05\tSingle Fact\n"
        "q06\tRank or Ordered Info.\n"
        "q07\tSingle Fact\n"
        "q08\tAggregated List\n"
        "q09\tSingle Fact\n"
        "q10\tComprehensive List\n";
    write_file(fixture_dir + "/bench/categories_10.tsv", categories);
    manifest = attach_categories(manifest, fixture_dir + "/bench/categories_10.tsv");

    save_manifest(fixture_dir + "/bench/manifest_10.json", manifest);
    std::cout << "wrote " << fixture_dir << "/bench/manifest_10.json ("
              << manifest.count() << " items)\n";

    nlohmann::ordered_json stub_map;
    for (const auto& [key, response] : canned)
        stub_map[key] = nlohmann::ordered_json::parse(response);
    write_file(fixture_dir + "/bench/stub_endpoint.json", stub_map.dump(2) + "\n");

    // exemplar selection exactly as the pipeline performs it
    TranslationDirection direction{builtin_profile("DBpedia"),
                                   builtin_profile("Wikidata")};
    auto pool = exemplars_from_manifest(pool_manifest, direction);
    FileEmbeddingProvider provider(fixture_dir + "/exemplars/vectors_12.txt");
    std::vector<EmbedRequest> reqs;
    for (const auto& e : pool) reqs.push_back({e.id, e.nlq});
    auto vectors = provider.embed(reqs);
    std::set<std::string> test_ids;
    for (const auto& item : manifest.items) test_ids.insert(item.id);
    auto exemplars =
        select_exemplars(pool, vectors, test_ids, {4, kFixtureSeed, false}).exemplars;

    // completion plan: FewShotER 8/10 correct, ZeroShotER 5/10 correct
    auto completion_for = [&](Strategy strategy, const BenchmarkItem& item,
                              size_t index) -> std::string {
        const std::string& gold_wd = item.query_by_kg.at("Wikidata");
        const std::string& gold_dbp = item.query_by_kg.at("DBpedia");
        size_t n = index + 1;  // q01 -> 1
        if (strategy == Strategy::FewShotER) {
            if (n == 3) return "I cannot translate this question.";
            if (n == 7) return "<sparql>SELECT ?x WHERE { ?x</sparql>";
            if (n == 5)
                return "The translation:\n```sparql\n" + gold_wd + "\n```";
            return "<think>mapping terms via er2</think>\n<sparql>" + gold_wd +
                   "</sparql>";
        }
        // ZeroShotER
        if (n == 1) return "<sparql>" + gold_dbp + "</sparql>";  // unadapted
        if (n == 3) {
            std::string wrong = gold_wd;
            auto pos = wrong.find("P57");
            if (pos != std::string::npos) wrong.replace(pos, 3, "P58");
            return "<sparql>" + wrong + "</sparql>";
        }
        if (n == 5) return "<sparql>SELECT ?x WHERE { ?x";  // truncated
        if (n == 7)
            return "<sparql>SELECT ?p WHERE { ?p "
                   "<http://www.wikidata.org/prop/direct/P19> "
                   "<http://www.wikidata.org/entity/Q76> }</sparql>";  // flipped
        if (n == 9) return "No mapping exists for this relation.";
        return "<sparql>" + gold_wd + "</sparql>";
    };

    std::string cassette_path = fixture_dir + "/llm/cassette_10x2.jsonl";
    write_file(cassette_path, "");
    Cassette cassette(cassette_path, CassetteMode::Record);
    size_t entries = 0;
    for (Strategy strategy : {Strategy::FewShotER, Strategy::ZeroShotER}) {
        for (size_t i = 0; i < manifest.items.size(); ++i) {
            const auto& item = manifest.items[i];
            PromptSpec spec;
            spec.nlq = item.nlq;
            spec.sparql_query_kg1 = item.query_by_kg.at("DBpedia");
            spec.kg1_name = "DBpedia";
            spec.kg2_name = "Wikidata";
            spec.er2 = item.er2_by_direction.at("DBpedia->Wikidata");
            spec.strategy = strategy;
            if (strategy == Strategy::FewShotER) spec.exemplars = exemplars;

            ChatRequest request{kModel, render_prompt(spec), 0.0, 4096};
            ChatResponse response;
            response.text = completion_for(strategy, item, i);
            response.finish_reason = "stop";
            response.usage.prompt_tokens = request.prompt.text.size() / 4;
            response.usage.completion_tokens = response.text.size() / 4;

            nlohmann::json snapshot;
            snapshot["model"] = kModel;
            snapshot["strategy"] = to_string(strategy);
            snapshot["item"] = item.id;
            snapshot["prompt_text"] = request.prompt.text;
            cassette.put(request.request_digest(), snapshot, response);
            ++entries;
        }
    }
    std::cout << "wrote " << cassette_path << " (" << entries << " exchanges)\n";

    nlohmann::ordered_json config;
    config["manifest"] = "fixtures/bench/manifest_10.json";
    config["directions"] = {{{"source", "DBpedia"}, {"target", "Wikidata"}}};
    config["models"] = {kModel};
    config["strategies"] = {"FewShotER", "ZeroShotER"};
    config["seed"] = kFixtureSeed;
    config["exemplars"] = {{"pool", "fixtures/exemplars/pool.json"},
                           {"vectors", "fixtures/exemplars/vectors_12.txt"},
                           {"k", 4}};
    config["llm"] = {{"cassette", "fixtures/llm/cassette_10x2.jsonl"},
                     {"mode", "replay"},
                     {"temperature", 0.0},
                     {"max_tokens", 4096},
                     {"parallelism", 4}};
    config["out_dir"] = "runs/fixture";
    write_file(fixture_dir + "/bench/run_config.json", config.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
    std::string fixture_dir = argc > 1 ? argv[1] : "fixtures";
    write_golden_prompts(fixture_dir);
    write_e2e_fixtures(fixture_dir);
    return 0;
}
