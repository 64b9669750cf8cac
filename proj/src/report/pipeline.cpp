#include "sqt/report/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sqt/align/align.hpp"
#include "sqt/exec/compare.hpp"
#include "sqt/exec/endpoint.hpp"
#include "sqt/exemplar/select.hpp"
#include "sqt/extract/extract.hpp"
#include "sqt/llm/client.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/sha256.hpp"

namespace sqt {

using nlohmann::json;

RunConfig load_run_config(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("", "run config is not valid JSON");

    RunConfig cfg;
    auto require = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw ConfigError(key, "missing field");
        return j.at(key);
    };
    cfg.manifest_path = require("manifest").get<std::string>();
    cfg.profiles_path = j.value("profiles", "");
    for (const auto& d : require("directions")) {
        if (!d.contains("source") || !d.contains("target"))
            throw ConfigError("directions", "each entry needs source and target");
        cfg.directions.emplace_back(d.at("source").get<std::string>(),
                                    d.at("target").get<std::string>());
    }
    for (const auto& m : require("models")) cfg.models.push_back(m.get<std::string>());
    for (const auto& s : require("strategies")) {
        auto strategy = strategy_from(s.get<std::string>());
        if (!strategy) throw ConfigError("strategies", "unknown strategy " + s.get<std::string>());
        cfg.strategies.push_back(*strategy);
    }
    cfg.seed = j.value("seed", uint64_t(0));
    if (j.contains("exemplars")) {
        const auto& e = j.at("exemplars");
        cfg.exemplar_pool_path = e.value("pool", "");
        cfg.exemplar_vectors_path = e.value("vectors", "");
        cfg.exemplar_k = e.value("k", size_t(4));
    }
    if (j.contains("llm")) {
        const auto& l = j.at("llm");
        cfg.cassette_path = l.value("cassette", "");
        cfg.cassette_mode = cassette_mode_from(l.value("mode", "replay"));
        cfg.temperature = l.value("temperature", 0.0);
        cfg.max_tokens = l.value("max_tokens", size_t(4096));
        cfg.parallelism = l.value("parallelism", size_t(4));
    }
    if (j.contains("mappings")) {
        cfg.mapping_cache_path = j.at("mappings").value("cache", "");
        cfg.allow_alignment_network = j.at("mappings").value("allow_network", false);
    }
    cfg.template_dir = j.value("template_dir", "");
    cfg.out_dir = j.value("out_dir", "runs/default");
    cfg.exec_timeout_s = j.value("exec_timeout_s", 60);
    return cfg;
}

namespace {

struct Cell {
    const BenchmarkItem* item;
    std::string model;
    Strategy strategy;
    TranslationDirection direction;
};

std::string direction_label(const TranslationDirection& d) { return d.label(); }

} // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    DatasetManifest manifest = load_manifest(config.manifest_path);

    std::vector<KgProfile> profiles =
        config.profiles_path.empty() ? builtin_profiles()
                                     : load_profiles(config.profiles_path);
    auto profile_of = [&](const std::string& name) -> const KgProfile& {
        for (const auto& p : profiles)
            if (p.name == name) return p;
        throw ConfigError("directions", "no profile named " + name);
    };

    TemplateSet templates = config.template_dir.empty()
                                ? TemplateSet::defaults()
                                : TemplateSet::from_directory(config.template_dir);

    // exemplar selection happens once per direction, seeded from the config
    std::set<std::string> test_ids;
    for (const auto& item : manifest.items) test_ids.insert(item.id);
    std::map<std::string, std::vector<Exemplar>> exemplars_by_direction;
    bool needs_exemplars =
        std::find(config.strategies.begin(), config.strategies.end(),
                  Strategy::FewShotER) != config.strategies.end();
    if (needs_exemplars) {
        if (config.exemplar_pool_path.empty() || config.exemplar_vectors_path.empty())
            throw ConfigError("exemplars", "FewShotER requires pool and vectors");
        DatasetManifest pool_manifest = load_manifest(config.exemplar_pool_path);
        FileEmbeddingProvider provider(config.exemplar_vectors_path);
        for (const auto& [source, target] : config.directions) {
            TranslationDirection direction{profile_of(source), profile_of(target)};
            auto pool = exemplars_from_manifest(pool_manifest, direction);
            std::vector<EmbedRequest> reqs;
            for (const auto& e : pool) reqs.push_back({e.id, e.nlq});
            auto vectors = provider.embed(reqs);
            auto selection = select_exemplars(pool, vectors, test_ids,
                                              {config.exemplar_k, config.seed, false});
            exemplars_by_direction[source + "->" + target] = selection.exemplars;
        }
    }

    MappingCache cache(config.mapping_cache_path.empty() ? std::string()
                                                         : config.mapping_cache_path);
    SparqlClient align_client;
    SparqlClient exec_client({std::chrono::seconds(config.exec_timeout_s), 1,
                              std::chrono::milliseconds(100)});

    auto cassette = config.cassette_path.empty()
                        ? std::make_unique<Cassette>(config.cassette_mode)
                        : std::make_unique<Cassette>(config.cassette_path,
                                                     config.cassette_mode);
    LlmClient llm(llm_options_from_env());

    // resume: keep existing records whose prompt digest still matches
    std::string records_path = config.out_dir + "/records.jsonl";
    std::map<std::string, RunRecord> existing;
    if (file_exists(records_path))
        for (auto& r : load_records(records_path)) existing[r.cell_key()] = r;

    std::vector<Cell> cells;
    for (const auto& [source, target] : config.directions) {
        TranslationDirection direction{profile_of(source), profile_of(target)};
        for (const auto& model : config.models)
            for (Strategy strategy : config.strategies)
                for (const auto& item : manifest.items)
                    cells.push_back({&item, model, strategy, direction});
    }

    FailureLog failure_log(config.out_dir + "/failures.jsonl");
    std::mutex artifact_mutex;

    PipelineResult result;
    std::vector<RunRecord> records(cells.size());
    std::atomic<size_t> next{0};
    std::atomic<size_t> new_completions{0};
    std::atomic<size_t> resumed{0};

    auto process_cell = [&](const Cell& cell) -> RunRecord {
        auto started = std::chrono::steady_clock::now();
        const std::string dir_label = direction_label(cell.direction);

        RunRecord record;
        record.item_id = cell.item->id;
        record.model_id = cell.model;
        record.strategy = cell.strategy;
        record.direction = dir_label;

        auto finish = [&](RunRecord r) {
            r.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
            return r;
        };
        auto fail = [&](const std::string& stage, const std::string& reason,
                        std::set<ErrorLabel> labels) {
            record.failed = true;
            record.correct = false;
            record.failure_stage = stage;
            record.failure_reason = reason;
            record.error_labels = std::move(labels);
            if (record.error_labels.empty())
                record.error_labels = {ErrorLabel::StructuralError};
            return finish(record);
        };

        const std::string& source_kg = cell.direction.source.name;
        const std::string& target_kg = cell.direction.target.name;
        auto source_query = cell.item->query_by_kg.find(source_kg);
        auto target_gold = cell.item->gold_by_kg.find(target_kg);
        auto target_query = cell.item->query_by_kg.find(target_kg);
        if (source_query == cell.item->query_by_kg.end() ||
            target_gold == cell.item->gold_by_kg.end() ||
            target_query == cell.item->query_by_kg.end())
            return fail("completion", "item lacks queries or gold for this direction", {});

        // er2: manifest first, then the mapping cache
        std::optional<Er2Doc> er2;
        if (cell.strategy != Strategy::ZeroShot) {
            auto embedded = cell.item->er2_by_direction.find(dir_label);
            if (embedded != cell.item->er2_by_direction.end()) {
                er2 = embedded->second;
            } else {
                PrefixTable defaults = cell.direction.source.prefixes;
                defaults.merge_defaults(well_known_prefixes());
                QueryDoc doc = expand_prefixes(parse_query(source_query->second), defaults);
                auto terms = extract_terms(doc, cell.direction.source);
                er2 = build_er2(terms, cell.direction,
                                config.allow_alignment_network ? &align_client : nullptr,
                                cache);
            }
        }

        PromptSpec spec;
        spec.nlq = cell.item->nlq;
        spec.sparql_query_kg1 = source_query->second;
        spec.kg1_name = source_kg;
        spec.kg2_name = target_kg;
        spec.er2 = er2;
        spec.strategy = cell.strategy;
        if (cell.strategy == Strategy::FewShotER)
            spec.exemplars = exemplars_by_direction.at(dir_label);

        RenderedPrompt prompt = render_prompt(spec, templates);
        record.prompt_digest = prompt.spec_digest;

        // resume: a completed cell with the same prompt digest is reused
        {
            auto it = existing.find(record.cell_key());
            if (it != existing.end() && it->second.prompt_digest == prompt.spec_digest) {
                resumed.fetch_add(1);
                return it->second;
            }
        }
        new_completions.fetch_add(1);

        ChatRequest request{cell.model, prompt, config.temperature, config.max_tokens};
        ChatResponse response;
        try {
            response = llm.complete(request, *cassette);
        } catch (const std::exception& e) {
            return fail("completion", e.what(), {});
        }
        record.raw_output_digest = sha256_hex(response.text);
        {
            std::lock_guard lock(artifact_mutex);
            write_file(config.out_dir + "/raw/" + record.raw_output_digest + ".txt",
                       response.text);
        }

        ExtractionResult extraction = extract_candidate(response.text);
        record.extraction_status = extraction.extracted() ? "extracted" : "failed";
        if (!extraction.extracted()) {
            {
                std::lock_guard lock(artifact_mutex);
                failure_log.append({record.cell_key(), record.raw_output_digest,
                                    "extraction", *extraction.failure_reason});
            }
            return fail("extraction", *extraction.failure_reason,
                        {ErrorLabel::QueryBadFormed});
        }
        record.extraction_method = to_string(*extraction.method);

        std::string candidate = sanitize(*extraction.query_text);
        record.candidate_query = candidate;

        PrescreenInput screen;
        QueryDoc gold_source_doc = parse_query(source_query->second);
        QueryDoc gold_target_doc = parse_query(target_query->second);
        screen.gold_source_doc = &gold_source_doc;
        screen.gold_target_doc = &gold_target_doc;
        screen.candidate_text = candidate;
        if (er2) screen.er2 = &*er2;

        auto verdict = validate_candidate(candidate);
        std::optional<QueryDoc> candidate_doc;
        if (verdict) {
            {
                std::lock_guard lock(artifact_mutex);
                failure_log.append({record.cell_key(), record.raw_output_digest,
                                    "validation", *verdict});
            }
            record.failure_stage = "validation";
            record.failure_reason = *verdict;
            record.failed = true;
            record.error_labels = prescreen(screen, cell.direction);
            return finish(record);
        }
        candidate_doc = parse_query(candidate);
        screen.candidate_doc = &*candidate_doc;

        bool order_sensitive = parse_query(target_query->second).order_sensitive;

        ResultSet candidate_result;
        try {
            candidate_result = exec_client.execute(
                candidate, cell.direction.target.effective_endpoint());
        } catch (const std::exception& e) {
            screen.execution_error = true;
            record.failure_stage = "execution";
            record.failure_reason = e.what();
            record.failed = true;
            record.error_labels = prescreen(screen, cell.direction);
            return finish(record);
        }

        ComparisonOutcome outcome =
            compare_results(target_gold->second, candidate_result, order_sensitive);
        record.comparison_equal = outcome.equal;
        record.comparison_mode = to_string(outcome.mode);
        record.missing_rows = outcome.missing_rows;
        record.extra_rows = outcome.extra_rows;
        record.correct = outcome.equal;

        if (!outcome.equal) {
            screen.candidate_empty = candidate_result.kind == ResultSet::Kind::Bindings &&
                                     candidate_result.rows.empty();
            screen.comparison_equal = false;
            record.error_labels = prescreen(screen, cell.direction);
        }
        return finish(record);
    };

    size_t workers = std::max<size_t>(1, std::min(config.parallelism, cells.size()));
    std::vector<std::thread> threads;
    for (size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                records[i] = process_cell(cells[i]);
            }
        });
    }
    for (auto& t : threads) t.join();

    sort_records(records);
    save_records(records_path, records);

    result.records = std::move(records);
    result.record_digest = records_digest(result.records);
    result.new_completions = new_completions.load();
    result.resumed = resumed.load();
    return result;
}

} // namespace sqt
