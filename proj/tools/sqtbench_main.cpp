// Command-line front end for the translation benchmark harness. Subcommands
// follow the pipeline stages: bench build, align extract, exemplars select,
// prompt render, run, classify, report.

#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqt/align/align.hpp"
#include "sqt/bench/ingest.hpp"
#include "sqt/exemplar/select.hpp"
#include "sqt/report/emit.hpp"
#include "sqt/report/pipeline.hpp"
#include "sqt/report/tables.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

using namespace sqt;

namespace {

std::vector<KgProfile> resolve_profiles(const std::string& path) {
    return path.empty() ? builtin_profiles() : load_profiles(path);
}

const KgProfile& profile_of(const std::vector<KgProfile>& profiles,
                            const std::string& name) {
    for (const auto& p : profiles)
        if (p.name == name) return p;
    throw ConfigError("profile", "no profile named " + name);
}

std::map<std::string, std::string> parse_kg_inputs(const std::vector<std::string>& specs) {
    std::map<std::string, std::string> out;
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--in", "expected KG=path, got " + spec);
        out[spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    return out;
}

int cmd_bench_build(const std::string& format_name,
                    const std::vector<std::string>& inputs,
                    const std::string& exclusions, size_t target_n, uint64_t seed,
                    const std::vector<std::string>& include_ids,
                    const std::string& category_file, const std::string& profiles_path,
                    const std::string& name, const std::string& split,
                    const std::string& note, int timeout_s, const std::string& out) {
    auto format = source_format_from(format_name);
    if (!format) throw ConfigError("--format", "unknown format " + format_name);

    std::vector<RawItem> merged;
    for (const auto& [kg, path] : parse_kg_inputs(inputs)) {
        auto result = ingest_source(path, *format, kg);
        std::cout << path << ": " << result.stats.english_questions
                  << " English questions, " << result.stats.queries_per_kg[kg] << " "
                  << kg << " queries";
        if (result.stats.skipped_no_english > 0)
            std::cout << " (" << result.stats.skipped_no_english
                      << " skipped without an English question)";
        std::cout << "\n";
        merged = merged.empty() ? result.items : merge_items(merged, result.items);
    }
    if (!exclusions.empty()) {
        size_t before = merged.size();
        merged = exclude_templates(merged, exclusions);
        std::cout << "template exclusions dropped " << before - merged.size()
                  << " items\n";
    }
    auto stats = combined_stats(merged);
    std::cout << "merged: " << stats.english_questions << " questions";
    for (const auto& [kg, n] : stats.queries_per_kg) std::cout << ", " << n << " " << kg;
    std::cout << "\n";

    BuildOptions options;
    options.target_n = target_n;
    options.seed = seed;
    options.include_ids = include_ids;
    options.name = name;
    options.source_split = split;
    options.snapshot_note = note;

    SparqlClient client({std::chrono::seconds(timeout_s), 3,
                         std::chrono::milliseconds(200)});
    DatasetManifest manifest =
        build_benchmark(merged, resolve_profiles(profiles_path), client, options);
    if (!category_file.empty()) manifest = attach_categories(manifest, category_file);

    save_manifest(out, manifest);
    std::cout << "wrote " << out << " with " << manifest.count() << " items\n";
    return 0;
}

int cmd_align_extract(const std::string& manifest_path, const std::string& source,
                      const std::string& target, const std::string& cache_path,
                      const std::vector<std::string>& manual_files, bool allow_network,
                      bool query_target_side, const std::string& profiles_path,
                      const std::string& out) {
    auto profiles = resolve_profiles(profiles_path);
    TranslationDirection direction{profile_of(profiles, source),
                                   profile_of(profiles, target)};
    DatasetManifest manifest = load_manifest(manifest_path);
    MappingCache cache(cache_path);
    for (const auto& path : manual_files)
        load_manual_mappings(path, direction, cache);

    SparqlClient client;
    AlignOptions options;
    options.query_target_side = query_target_side;

    PrefixTable defaults = direction.source.prefixes;
    defaults.merge_defaults(well_known_prefixes());

    for (auto& item : manifest.items) {
        auto query = item.query_by_kg.find(source);
        if (query == item.query_by_kg.end()) continue;
        QueryDoc doc = expand_prefixes(parse_query(query->second), defaults);
        auto terms = extract_terms(doc, direction.source);
        item.er2_by_direction[direction.label()] =
            build_er2(terms, direction, allow_network ? &client : nullptr, cache,
                      options);
    }

    auto stats = coverage_stats(manifest.items, direction, cache);
    std::cout << "terms: " << stats.total_terms << " unique, " << stats.mapped
              << " mapped, " << stats.unmapped << " unmapped\n";
    for (const auto& iri : stats.unmapped_list)
        std::cout << "  unmapped: " << iri.value << "\n";

    save_manifest(out.empty() ? manifest_path : out, manifest);
    std::cout << "wrote " << (out.empty() ? manifest_path : out) << "\n";
    return 0;
}

int cmd_exemplars_select(const std::string& pool_path, const std::string& vectors_path,
                         const std::string& source, const std::string& target,
                         size_t k, uint64_t seed, const std::string& exclude_manifest,
                         const std::string& profiles_path, const std::string& out) {
    auto profiles = resolve_profiles(profiles_path);
    TranslationDirection direction{profile_of(profiles, source),
                                   profile_of(profiles, target)};
    auto pool = exemplars_from_manifest(load_manifest(pool_path), direction);
    FileEmbeddingProvider provider(vectors_path);
    std::vector<EmbedRequest> reqs;
    for (const auto& e : pool) reqs.push_back({e.id, e.nlq});
    auto vectors = provider.embed(reqs);

    std::set<std::string> test_ids;
    if (!exclude_manifest.empty())
        for (const auto& item : load_manifest(exclude_manifest).items)
            test_ids.insert(item.id);

    auto selection = select_exemplars(pool, vectors, test_ids, {k, seed, false});

    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : selection.exemplars) {
        nlohmann::ordered_json entry;
        entry["id"] = e.id;
        entry["nlq"] = e.nlq;
        entry["query_kg1"] = e.query_kg1;
        entry["query_kg2"] = e.query_kg2;
        entry["er2"] = nlohmann::ordered_json::parse(render_er2(e.er2));
        j.push_back(std::move(entry));
    }
    std::string text = j.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else {
        write_file(out, text);
        std::cout << "wrote " << out << " (" << selection.exemplars.size()
                  << " exemplars)\n";
    }
    return 0;
}

int cmd_prompt_render(const std::string& manifest_path, const std::string& item_id,
                      const std::string& strategy_name, const std::string& source,
                      const std::string& target, const std::string& pool_path,
                      const std::string& vectors_path, uint64_t seed,
                      const std::string& template_dir, const std::string& profiles_path,
                      const std::string& out) {
    auto strategy = strategy_from(strategy_name);
    if (!strategy) throw ConfigError("--strategy", "unknown strategy " + strategy_name);
    auto profiles = resolve_profiles(profiles_path);
    TranslationDirection direction{profile_of(profiles, source),
                                   profile_of(profiles, target)};
    DatasetManifest manifest = load_manifest(manifest_path);
    const BenchmarkItem* item = manifest.find(item_id);
    if (!item) throw ConfigError("--item", "no item " + item_id);

    PromptSpec spec;
    spec.nlq = item->nlq;
    spec.sparql_query_kg1 = item->query_by_kg.at(source);
    spec.kg1_name = source;
    spec.kg2_name = target;
    spec.strategy = *strategy;
    if (*strategy != Strategy::ZeroShot) {
        auto er2 = item->er2_by_direction.find(direction.label());
        if (er2 == item->er2_by_direction.end())
            throw ConfigError("--item", "item has no er2 for " + direction.label() +
                                            "; run `align extract` first");
        spec.er2 = er2->second;
    }
    if (*strategy == Strategy::FewShotER) {
        if (pool_path.empty() || vectors_path.empty())
            throw ConfigError("--pool", "FewShotER needs --pool and --vectors");
        auto pool = exemplars_from_manifest(load_manifest(pool_path), direction);
        FileEmbeddingProvider provider(vectors_path);
        std::vector<EmbedRequest> reqs;
        for (const auto& e : pool) reqs.push_back({e.id, e.nlq});
        std::set<std::string> test_ids;
        for (const auto& i : manifest.items) test_ids.insert(i.id);
        spec.exemplars =
            select_exemplars(pool, provider.embed(reqs), test_ids, {4, seed, false})
                .exemplars;
    }

    TemplateSet templates = template_dir.empty() ? TemplateSet::defaults()
                                                 : TemplateSet::from_directory(template_dir);
    auto rendered = render_prompt(spec, templates);
    if (out.empty()) {
        std::cout << rendered.text << "\n";
        std::cerr << "spec_digest: " << rendered.spec_digest << "\n";
    } else {
        write_file(out, rendered.text);
        std::cout << "wrote " << out << " (digest " << rendered.spec_digest << ")\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir_override) {
    RunConfig config = load_run_config(config_path);
    if (!out_dir_override.empty()) config.out_dir = out_dir_override;

    auto result = run_pipeline(config);
    size_t expected = 0;
    {
        DatasetManifest manifest = load_manifest(config.manifest_path);
        expected = manifest.count() * config.models.size() * config.strategies.size() *
                   config.directions.size();
    }
    auto table = accuracy_table(result.records);
    std::cout << emit_accuracy_text(table);
    std::cout << "\ncells: " << result.records.size() << "/" << expected << " ("
              << result.resumed << " resumed, " << result.new_completions << " new)\n";
    std::cout << "record digest: " << result.record_digest << "\n";
    std::cout << "records: " << config.out_dir << "/records.jsonl\n";
    return result.records.size() == expected ? 0 : 1;
}

int cmd_classify(const std::string& records_path, const std::string& manifest_path,
                 const std::string& source, const std::string& target,
                 const std::string& manual_path, const std::string& profiles_path,
                 const std::string& out) {
    auto profiles = resolve_profiles(profiles_path);
    TranslationDirection direction{profile_of(profiles, source),
                                   profile_of(profiles, target)};
    DatasetManifest manifest = load_manifest(manifest_path);
    auto records = load_records(records_path);

    std::map<std::string, Annotation> manual;
    if (!manual_path.empty())
        for (auto& a : load_annotations(manual_path)) manual[a.run_id] = a;

    std::vector<Annotation> merged;
    for (const auto& r : records) {
        if (r.correct || r.direction != direction.label()) continue;
        const BenchmarkItem* item = manifest.find(r.item_id);
        if (!item) continue;

        PrescreenInput input;
        QueryDoc gold_source = parse_query(item->query_by_kg.at(source));
        QueryDoc gold_target = parse_query(item->query_by_kg.at(target));
        input.gold_source_doc = &gold_source;
        input.gold_target_doc = &gold_target;
        input.candidate_text = r.candidate_query;
        std::optional<QueryDoc> candidate_doc;
        if (!r.candidate_query.empty() && !validate_candidate(r.candidate_query)) {
            candidate_doc = parse_query(r.candidate_query);
            input.candidate_doc = &*candidate_doc;
        }
        std::optional<Er2Doc> er2;
        auto it = item->er2_by_direction.find(direction.label());
        if (it != item->er2_by_direction.end()) {
            er2 = it->second;
            input.er2 = &*er2;
        }
        input.execution_error = r.failure_stage == "execution";
        input.candidate_empty =
            !r.failed && r.extra_rows == 0 && r.missing_rows > 0;
        input.comparison_equal = false;

        Annotation heuristic{r.cell_key(), prescreen(input, direction),
                             AnnotationSource::Heuristic, "", "prescreen", ""};
        std::optional<Annotation> manual_entry;
        if (auto m = manual.find(r.cell_key()); m != manual.end())
            manual_entry = m->second;
        merged.push_back(merge_annotations(heuristic, manual_entry));
    }
    save_annotations(out, merged);
    std::cout << "wrote " << out << " (" << merged.size() << " annotations)\n";
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& annotations_path,
               const std::string& manifest_path, const std::string& formats_arg,
               const std::string& out_dir) {
    auto records = load_records(records_path);
    auto manifest = load_manifest(manifest_path);
    std::vector<Annotation> annotations;
    if (!annotations_path.empty()) {
        annotations = load_annotations(annotations_path);
    } else {
        for (const auto& r : records)
            if (!r.correct)
                annotations.push_back({r.cell_key(), r.error_labels,
                                       AnnotationSource::Heuristic, "", "", ""});
    }

    std::set<OutputFormat> formats;
    for (const auto& f : split(formats_arg, ',')) {
        auto parsed = output_format_from(trim(f));
        if (!parsed) throw ConfigError("--formats", "unknown format " + f);
        formats.insert(*parsed);
    }

    auto table = accuracy_table(records);
    auto report = error_report(annotations, records, manifest);
    auto files = emit_outputs(table, report, formats, out_dir);

    std::cout << emit_accuracy_text(table) << "\n" << emit_error_text(report);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPARQL query translation benchmark harness"};
    app.require_subcommand(1);

    std::string profiles_path;
    app.add_option("--profiles", profiles_path, "profile JSON file (default: built-ins)");

    // bench build
    auto* bench = app.add_subcommand("bench", "benchmark dataset commands");
    auto* build = bench->add_subcommand("build", "ingest, filter, snapshot and sample");
    std::string format = "qald", exclusions, category_file, name = "benchmark";
    std::string split_name, note, build_out = "manifest.json";
    std::vector<std::string> inputs, include_ids;
    size_t target_n = 100;
    uint64_t build_seed = 0;
    int timeout_s = 60;
    build->add_option("--format", format, "qald | dblp_quad");
    build->add_option("--in", inputs, "KG=path input file (repeatable)")->required();
    build->add_option("--exclude-templates", exclusions, "template exclusion list");
    build->add_option("--target-n", target_n, "benchmark size");
    build->add_option("--seed", build_seed, "sampling seed");
    build->add_option("--include", include_ids, "item ids picked before sampling");
    build->add_option("--category-file", category_file, "id<TAB>category file");
    build->add_option("--name", name, "manifest name");
    build->add_option("--split", split_name, "source split note");
    build->add_option("--note", note, "snapshot provenance note");
    build->add_option("--timeout", timeout_s, "per-query timeout seconds");
    build->add_option("--out", build_out, "output manifest path");

    // align extract
    auto* align = app.add_subcommand("align", "entity/relation mapping commands");
    auto* extract = align->add_subcommand("extract", "build er2 for every item");
    std::string al_manifest, al_source, al_target, al_cache = "mappings.jsonl", al_out;
    std::vector<std::string> manual_files;
    bool allow_network = false, query_target_side = false;
    extract->add_option("--manifest", al_manifest)->required();
    extract->add_option("--source", al_source)->required();
    extract->add_option("--target", al_target)->required();
    extract->add_option("--cache", al_cache, "mapping cache file");
    extract->add_option("--manual", manual_files, "manual mapping file (repeatable)");
    extract->add_flag("--allow-network", allow_network,
                      "consult the source endpoint on cache misses");
    extract->add_flag("--query-target-side", query_target_side,
                      "equivalence links live on the target KG");
    extract->add_option("--out", al_out, "output manifest (default: in place)");

    // exemplars select
    auto* exemplars = app.add_subcommand("exemplars", "few-shot exemplar commands");
    auto* select = exemplars->add_subcommand("select", "k-means diverse selection");
    std::string ex_pool, ex_vectors, ex_source, ex_target, ex_exclude, ex_out;
    size_t ex_k = 4;
    uint64_t ex_seed = 0;
    select->add_option("--pool", ex_pool)->required();
    select->add_option("--vectors", ex_vectors)->required();
    select->add_option("--source", ex_source)->required();
    select->add_option("--target", ex_target)->required();
    select->add_option("--k", ex_k);
    select->add_option("--seed", ex_seed);
    select->add_option("--exclude-manifest", ex_exclude,
                       "test manifest whose ids must not leak");
    select->add_option("--out", ex_out, "output file (default: stdout)");

    // prompt render
    auto* prompt = app.add_subcommand("prompt", "prompt commands");
    auto* render = prompt->add_subcommand("render", "render one prompt");
    std::string pr_manifest, pr_item, pr_strategy, pr_source, pr_target;
    std::string pr_pool, pr_vectors, pr_templates, pr_out;
    uint64_t pr_seed = 0;
    render->add_option("--manifest", pr_manifest)->required();
    render->add_option("--item", pr_item)->required();
    render->add_option("--strategy", pr_strategy)->required();
    render->add_option("--source", pr_source)->required();
    render->add_option("--target", pr_target)->required();
    render->add_option("--pool", pr_pool);
    render->add_option("--vectors", pr_vectors);
    render->add_option("--seed", pr_seed);
    render->add_option("--template-dir", pr_templates);
    render->add_option("--out", pr_out);

    // run
    auto* run = app.add_subcommand("run", "execute the full cell matrix");
    std::string run_config_path, run_out_dir;
    run->add_option("--config", run_config_path)->required();
    run->add_option("--out-dir", run_out_dir, "override the config out_dir");

    // classify
    auto* classify = app.add_subcommand("classify", "heuristic error screening");
    std::string cl_records, cl_manifest, cl_source, cl_target, cl_manual,
        cl_out = "annotations.jsonl";
    classify->add_option("--records", cl_records)->required();
    classify->add_option("--manifest", cl_manifest)->required();
    classify->add_option("--source", cl_source)->required();
    classify->add_option("--target", cl_target)->required();
    classify->add_option("--manual", cl_manual, "manual annotation sidecar");
    classify->add_option("--out", cl_out);

    // report
    auto* report = app.add_subcommand("report", "accuracy and error reports");
    std::string rp_records, rp_annotations, rp_manifest, rp_formats = "text,csv,svg";
    std::string rp_out = "reports";
    report->add_option("--records", rp_records)->required();
    report->add_option("--annotations", rp_annotations);
    report->add_option("--manifest", rp_manifest)->required();
    report->add_option("--formats", rp_formats, "comma list of text,csv,svg");
    report->add_option("--out-dir", rp_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return cmd_bench_build(format, inputs, exclusions, target_n, build_seed,
                                   include_ids, category_file, profiles_path, name,
                                   split_name, note, timeout_s, build_out);
        if (extract->parsed())
            return cmd_align_extract(al_manifest, al_source, al_target, al_cache,
                                     manual_files, allow_network, query_target_side,
                                     profiles_path, al_out);
        if (select->parsed())
            return cmd_exemplars_select(ex_pool, ex_vectors, ex_source, ex_target, ex_k,
                                        ex_seed, ex_exclude, profiles_path, ex_out);
        if (render->parsed())
            return cmd_prompt_render(pr_manifest, pr_item, pr_strategy, pr_source,
                                     pr_target, pr_pool, pr_vectors, pr_seed,
                                     pr_templates, profiles_path, pr_out);
        if (run->parsed()) return cmd_run(run_config_path, run_out_dir);
        if (classify->parsed())
            return cmd_classify(cl_records, cl_manifest, cl_source, cl_target, cl_manual,
                                profiles_path, cl_out);
        if (report->parsed())
            return cmd_report(rp_records, rp_annotations, rp_manifest, rp_formats,
                              rp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "no subcommand\n";
    return 2;
}
