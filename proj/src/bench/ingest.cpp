#include "sqt/bench/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqt/sparql/query_doc.hpp"
#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

using nlohmann::json;

std::optional<SourceFormat> source_format_from(const std::string& s) {
    if (s == "qald") return SourceFormat::Qald;
    if (s == "dblp_quad") return SourceFormat::DblpQuad;
    return std::nullopt;
}

namespace {

std::string item_id(const json& q, size_t index) {
    if (!q.contains("id")) throw FormatError(index, "question missing id");
    const auto& id = q.at("id");
    return id.is_string() ? id.get<std::string>() : std::to_string(id.get<int64_t>());
}

// QALD: "question" is a list of {language, string}; DBLP-QuAD: an object
// holding the English string directly.
std::optional<std::string> english_nlq(const json& q, SourceFormat format,
                                       size_t index) {
    if (!q.contains("question")) throw FormatError(index, "question field missing");
    const auto& question = q.at("question");
    if (format == SourceFormat::DblpQuad) {
        if (question.is_object() && question.contains("string"))
            return question.at("string").get<std::string>();
        throw FormatError(index, "question.string missing");
    }
    if (!question.is_array()) throw FormatError(index, "question must be a list");
    for (const auto& variant : question) {
        if (variant.value("language", "") == "en" && variant.contains("string"))
            return variant.at("string").get<std::string>();
    }
    return std::nullopt;
}

std::optional<std::string> sparql_of(const json& q) {
    if (!q.contains("query")) return std::nullopt;
    const auto& query = q.at("query");
    std::string text;
    if (query.is_object() && query.contains("sparql"))
        text = query.at("sparql").get<std::string>();
    else if (query.is_string())
        text = query.get<std::string>();
    text = trim(text);
    if (text.empty()) return std::nullopt;
    return text;
}

} // namespace

IngestResult ingest_source(const std::string& path, SourceFormat format,
                           const std::string& kg_name) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw FormatError(0, "source file is not valid JSON");
    if (!j.contains("questions") || !j.at("questions").is_array())
        throw FormatError(0, "missing questions array");

    IngestResult out;
    size_t index = 0;
    for (const auto& q : j.at("questions")) {
        auto nlq = english_nlq(q, format, index);
        if (!nlq) {
            ++out.stats.skipped_no_english;
            ++index;
            continue;
        }
        RawItem item;
        item.id = item_id(q, index);
        item.nlq = *nlq;
        if (auto sparql = sparql_of(q)) {
            item.query_by_kg[kg_name] = *sparql;
            ++out.stats.queries_per_kg[kg_name];
        }
        if (q.contains("template_id"))
            item.template_id = q.at("template_id").get<std::string>();
        ++out.stats.english_questions;
        out.items.push_back(std::move(item));
        ++index;
    }
    return out;
}

std::vector<RawItem> merge_items(const std::vector<RawItem>& a,
                                 const std::vector<RawItem>& b) {
    std::vector<RawItem> merged = a;
    std::map<std::string, size_t> index_by_id;
    for (size_t i = 0; i < merged.size(); ++i) index_by_id[merged[i].id] = i;
    for (const auto& item : b) {
        auto it = index_by_id.find(item.id);
        if (it == index_by_id.end()) {
            index_by_id[item.id] = merged.size();
            merged.push_back(item);
            continue;
        }
        RawItem& dest = merged[it->second];
        for (const auto& [kg, q] : item.query_by_kg) dest.query_by_kg[kg] = q;
        if (!dest.template_id && item.template_id) dest.template_id = item.template_id;
    }
    return merged;
}

IngestStats combined_stats(const std::vector<RawItem>& items) {
    IngestStats stats;
    stats.english_questions = items.size();
    for (const auto& item : items)
        for (const auto& [kg, q] : item.query_by_kg) ++stats.queries_per_kg[kg];
    return stats;
}

std::vector<RawItem> exclude_templates(const std::vector<RawItem>& items,
                                       const std::string& exclusion_file) {
    std::set<std::string> excluded;
    std::ifstream in(exclusion_file);
    if (!in) throw std::runtime_error("cannot open " + exclusion_file);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        excluded.insert(line);
    }
    std::vector<RawItem> kept;
    for (const auto& item : items)
        if (!item.template_id || !excluded.count(*item.template_id))
            kept.push_back(item);
    return kept;
}

DatasetManifest build_benchmark(const std::vector<RawItem>& items,
                                const std::vector<KgProfile>& profiles,
                                const SparqlClient& client,
                                const BuildOptions& options) {
    auto profile_of = [&](const std::string& name) -> const KgProfile* {
        for (const auto& p : profiles)
            if (p.name == name) return &p;
        return nullptr;
    };

    struct Candidate {
        BenchmarkItem item;
    };
    std::vector<BenchmarkItem> pool;

    std::vector<RawItem> sorted = items;
    std::sort(sorted.begin(), sorted.end(),
              [](const RawItem& a, const RawItem& b) { return a.id < b.id; });

    for (const auto& raw : sorted) {
        if (raw.query_by_kg.size() < 2) continue;

        BenchmarkItem item;
        item.id = raw.id;
        item.nlq = raw.nlq;
        bool ok = true;
        for (const auto& [kg, query] : raw.query_by_kg) {
            const KgProfile* profile = profile_of(kg);
            if (profile == nullptr || !validate_syntax(query).empty()) {
                ok = false;
                break;
            }
            try {
                ResultSet rs = client.execute(query, profile->effective_endpoint());
                if (rs.kind == ResultSet::Kind::Bindings && rs.rows.empty()) {
                    ok = false;  // non-empty rule
                    break;
                }
                item.gold_by_kg[kg] = std::move(rs);
                item.query_by_kg[kg] = query;
            } catch (const std::exception&) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // comparable: same result kind, and same arity for bindings
        const ResultSet* first = nullptr;
        for (const auto& [kg, rs] : item.gold_by_kg) {
            if (!first) {
                first = &rs;
                continue;
            }
            if (rs.kind != first->kind ||
                (rs.kind == ResultSet::Kind::Bindings && rs.arity() != first->arity()))
                ok = false;
        }
        if (ok) pool.push_back(std::move(item));
    }

    if (pool.size() < options.target_n)
        throw InsufficientItems("filtered pool holds " + std::to_string(pool.size()) +
                                " items, need " + std::to_string(options.target_n));

    // curated includes first, then a seeded shuffle of the remainder
    std::vector<size_t> chosen;
    std::set<std::string> include_set(options.include_ids.begin(),
                                      options.include_ids.end());
    std::vector<size_t> rest;
    for (size_t i = 0; i < pool.size(); ++i) {
        if (include_set.count(pool[i].id)) chosen.push_back(i);
        else rest.push_back(i);
    }
    std::mt19937_64 rng(options.seed);
    std::shuffle(rest.begin(), rest.end(), rng);
    for (size_t i : rest) {
        if (chosen.size() >= options.target_n) break;
        chosen.push_back(i);
    }
    chosen.resize(std::min(chosen.size(), options.target_n));

    std::sort(chosen.begin(), chosen.end(),
              [&](size_t a, size_t b) { return pool[a].id < pool[b].id; });

    DatasetManifest manifest;
    manifest.name = options.name;
    manifest.source_split = options.source_split;
    manifest.snapshot_note = options.snapshot_note;
    for (size_t i : chosen) manifest.items.push_back(std::move(pool[i]));
    return manifest;
}

DatasetManifest attach_categories(DatasetManifest manifest,
                                  const std::string& category_file) {
    std::ifstream in(category_file);
    if (!in) throw std::runtime_error("cannot open " + category_file);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto tab = stripped.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(category_file + ":" + std::to_string(lineno) +
                                     ": expected id<TAB>category");
        std::string id = trim(stripped.substr(0, tab));
        std::string category = trim(stripped.substr(tab + 1));
        if (!is_known_category(category))
            throw UnknownCategory("unknown category '" + category + "' at line " +
                                  std::to_string(lineno));
        bool found = false;
        for (auto& item : manifest.items) {
            if (item.id == id) {
                item.category = category;
                found = true;
                break;
            }
        }
        if (!found)
            throw UnknownId("no manifest item with id '" + id + "' at line " +
                            std::to_string(lineno));
    }
    return manifest;
}

std::map<std::string, size_t> category_distribution(const DatasetManifest& manifest) {
    std::map<std::string, size_t> counts;
    for (const auto& item : manifest.items)
        if (item.category) ++counts[*item.category];
    return counts;
}

} // namespace sqt
