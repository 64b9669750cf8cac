#include "sqt/align/align.hpp"

#include <chrono>
#include <set>

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

namespace {

std::string utc_now_iso() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

} // namespace

Iri equivalence_predicate(TermRole role) {
    switch (role) {
        case TermRole::Property:
            return Iri("http://www.w3.org/2002/07/owl#equivalentProperty");
        case TermRole::Class:
            return Iri("http://www.w3.org/2002/07/owl#equivalentClass");
        default:
            return Iri("http://www.w3.org/2002/07/owl#sameAs");
    }
}

MappingKind mapping_kind_for(TermRole role) {
    switch (role) {
        case TermRole::Property: return MappingKind::EquivalentProperty;
        case TermRole::Class: return MappingKind::EquivalentClass;
        default: return MappingKind::SameAs;
    }
}

TermMapping fetch_equivalents(const TermOccurrence& term,
                              const TranslationDirection& direction,
                              const SparqlClient& client, MappingCache& cache,
                              const AlignOptions& options) {
    Iri predicate = equivalence_predicate(term.role);
    std::string query;
    if (options.query_target_side) {
        query = "SELECT DISTINCT ?t WHERE { ?t <" + predicate.value + "> <" +
                term.iri.value + "> }";
    } else {
        query = "SELECT DISTINCT ?t WHERE { <" + term.iri.value + "> <" +
                predicate.value + "> ?t }";
    }
    const KgProfile& queried =
        options.query_target_side ? direction.target : direction.source;

    ResultSet rs = client.execute(query, queried.effective_endpoint());

    TermMapping mapping;
    mapping.source_id = term.iri;
    mapping.kind = mapping_kind_for(term.role);
    mapping.provenance = MappingProvenance::EndpointLookup;
    mapping.retrieved_at = utc_now_iso();
    for (const auto& row : rs.rows) {
        for (const auto& [var, value] : row) {
            if (value.kind != RdfTerm::Kind::Iri) continue;
            Iri candidate(value.value);
            if (direction.target.owns(candidate)) mapping.target_ids.push_back(candidate);
        }
    }
    canonicalize_targets(mapping.target_ids);
    cache.store(mapping, direction.target.name);
    return mapping;
}

Er2Doc build_er2(const std::vector<TermOccurrence>& terms,
                 const TranslationDirection& direction, const SparqlClient* client,
                 MappingCache& cache, const AlignOptions& options) {
    Er2Doc doc;
    doc.source_kg = direction.source.name;
    doc.target_kg = direction.target.name;

    std::set<std::string> seen;
    for (const auto& term : terms) {
        if (!seen.insert(term.iri.value).second) continue;
        TermMapping mapping;
        if (auto cached = cache.lookup(term.iri, direction.target.name)) {
            mapping = *cached;
        } else if (client != nullptr) {
            mapping = fetch_equivalents(term, direction, *client, cache, options);
        } else {
            throw EndpointError(0, "offline and no cache entry for " + term.iri.value);
        }
        doc.entries.push_back({mapping.source_id, mapping.target_ids});
    }
    return doc;
}

std::vector<TermMapping> load_manual_mappings(const std::string& path,
                                              const TranslationDirection& direction,
                                              MappingCache& cache) {
    std::string text = read_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw SchemaError(0, "manual mapping file must be a JSON array");

    Er2Doc parsed = parse_er2(text, direction.source.name, direction.target.name);

    std::vector<TermMapping> out;
    size_t idx = 0;
    for (const auto& entry : parsed.entries) {
        TermMapping m;
        m.source_id = entry.source_id;
        m.target_ids = entry.target_ids;
        canonicalize_targets(m.target_ids);
        m.provenance = MappingProvenance::ManualFile;
        m.kind = MappingKind::Manual;
        if (j[idx].contains("kind"))
            m.kind = mapping_kind_from(j[idx]["kind"].get<std::string>());
        m.retrieved_at = utc_now_iso();
        for (const auto& id : m.target_ids) {
            if (!direction.target.owns(id))
                throw SchemaError(idx, "target id outside " + direction.target.name +
                                           " namespaces: " + id.value);
        }
        cache.store(m, direction.target.name);
        out.push_back(std::move(m));
        ++idx;
    }
    return out;
}

CoverageStats coverage_stats(const std::vector<BenchmarkItem>& items,
                             const TranslationDirection& direction,
                             const MappingCache& cache) {
    CoverageStats stats;
    std::set<std::string> seen;

    PrefixTable defaults = direction.source.prefixes;
    defaults.merge_defaults(well_known_prefixes());

    for (const auto& item : items) {
        auto it = item.query_by_kg.find(direction.source.name);
        if (it == item.query_by_kg.end()) continue;
        QueryDoc doc = expand_prefixes(parse_query(it->second), defaults);
        for (const auto& term : extract_terms(doc, direction.source)) {
            if (!seen.insert(term.iri.value).second) continue;
            ++stats.total_terms;
            auto mapping = cache.lookup(term.iri, direction.target.name);
            if (mapping && mapping->mapped()) {
                ++stats.mapped;
            } else {
                ++stats.unmapped;
                stats.unmapped_list.push_back(term.iri);
            }
        }
    }
    return stats;
}

} // namespace sqt
