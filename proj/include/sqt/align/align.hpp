#ifndef SQT_ALIGN_ALIGN_HPP
#define SQT_ALIGN_ALIGN_HPP

#include <vector>

#include "sqt/align/cache.hpp"
#include "sqt/align/er2.hpp"
#include "sqt/bench/manifest.hpp"
#include "sqt/exec/endpoint.hpp"
#include "sqt/kg/profile.hpp"
#include "sqt/sparql/query_doc.hpp"

namespace sqt {

struct AlignOptions {
    /// Equivalence links are queried on the source KG by default (that is
    /// the side that publishes them for this corpus); set to query the
    /// target endpoint for KGs that store the links inversely.
    bool query_target_side = false;
};

/// The equivalence predicate used for a term role: owl:sameAs for entities
/// (and unknowns), owl:equivalentProperty for properties, owl:equivalentClass
/// for classes.
Iri equivalence_predicate(TermRole role);
MappingKind mapping_kind_for(TermRole role);

/// Resolves one source term to its target-KG equivalents via an endpoint
/// lookup. Results are filtered to the target profile's namespaces, sorted
/// and cached (empty results included). Endpoint failures are retried by
/// the client and then surfaced; they are never cached.
TermMapping fetch_equivalents(const TermOccurrence& term,
                              const TranslationDirection& direction,
                              const SparqlClient& client, MappingCache& cache,
                              const AlignOptions& options = {});

/// Builds the er2 document for the unique terms of one expanded query, in
/// first-occurrence order. Cache entries (manual first) are used when
/// present; otherwise the client is consulted, or EndpointError(0) is
/// thrown when client is null (offline mode).
Er2Doc build_er2(const std::vector<TermOccurrence>& terms,
                 const TranslationDirection& direction, const SparqlClient* client,
                 MappingCache& cache, const AlignOptions& options = {});

/// Loads a manual mapping file (the er2 array schema plus "kind") into the
/// cache with manual provenance, which shadows endpoint entries.
std::vector<TermMapping> load_manual_mappings(const std::string& path,
                                              const TranslationDirection& direction,
                                              MappingCache& cache);

struct CoverageStats {
    size_t total_terms = 0;
    size_t mapped = 0;
    size_t unmapped = 0;
    std::vector<Iri> unmapped_list;
};

/// Counts unique source-KG terms across the benchmark and how many have a
/// non-empty mapping in the cache.
CoverageStats coverage_stats(const std::vector<BenchmarkItem>& items,
                             const TranslationDirection& direction,
                             const MappingCache& cache);

} // namespace sqt

#endif
