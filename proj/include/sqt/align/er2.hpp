#ifndef SQT_ALIGN_ER2_HPP
#define SQT_ALIGN_ER2_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/sparql/iri.hpp"

namespace sqt {

enum class MappingKind { SameAs, EquivalentProperty, EquivalentClass, Orcid, Manual };
enum class MappingProvenance { EndpointLookup, ManualFile };

std::string to_string(MappingKind k);
std::string to_string(MappingProvenance p);
MappingKind mapping_kind_from(const std::string& s);
MappingProvenance mapping_provenance_from(const std::string& s);

/// One source-KG IRI mapped to zero or more target-KG IRIs. target_ids are
/// deduplicated and sorted lexicographically; every one lies inside the
/// target KG's namespaces.
struct TermMapping {
    Iri source_id;
    std::vector<Iri> target_ids;
    MappingKind kind = MappingKind::SameAs;
    MappingProvenance provenance = MappingProvenance::EndpointLookup;
    std::string retrieved_at;  // ISO-8601 UTC, audit only

    bool mapped() const { return !target_ids.empty(); }
};

/// Sorts, deduplicates and drops IRIs outside the given namespace test.
void canonicalize_targets(std::vector<Iri>& ids);

struct Er2Entry {
    Iri source_id;
    std::vector<Iri> target_ids;  // may be empty: unmapped terms stay visible

    bool operator==(const Er2Entry&) const = default;
};

/// The entity/relation mapping document injected into prompts: one entry per
/// unique source term in first-occurrence order.
struct Er2Doc {
    std::string source_kg;  // profile name, e.g. "DBpedia"
    std::string target_kg;
    std::vector<Er2Entry> entries;

    bool operator==(const Er2Doc&) const = default;
};

/// Key names as they appear in rendered documents: lowercase KG name plus
/// "_id" (source, string) or "_ids" (target, array).
std::string er2_source_key(const std::string& kg_name);
std::string er2_target_key(const std::string& kg_name);

/// Canonical one-line rendering, e.g.
/// [{"dbpedia_id": "http://...", "wikidata_ids": ["http://..."]}].
/// Byte-deterministic; this exact layout is embedded in prompts.
std::string render_er2(const Er2Doc& doc);

struct SchemaError : std::runtime_error {
    size_t index;  // offending entry, 0-based
    SchemaError(size_t i, const std::string& msg)
        : std::runtime_error(msg + " (entry " + std::to_string(i) + ")"), index(i) {}
};

/// Parses a rendered er2 array. Both the singular "<kg>_id" and the list
/// "<kg>_ids" target forms are accepted on input.
Er2Doc parse_er2(const std::string& text, const std::string& source_kg,
                 const std::string& target_kg);

} // namespace sqt

#endif
