#ifndef SQT_BENCH_INGEST_HPP
#define SQT_BENCH_INGEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqt/bench/manifest.hpp"
#include "sqt/exec/endpoint.hpp"
#include "sqt/kg/profile.hpp"

namespace sqt {

enum class SourceFormat { Qald, DblpQuad };

std::optional<SourceFormat> source_format_from(const std::string& s);

/// One dataset entry before benchmark filtering. A source file carries
/// queries for a single KG; merge_items joins per-KG ingests by id.
struct RawItem {
    std::string id;
    std::string nlq;
    std::map<std::string, std::string> query_by_kg;
    std::optional<std::string> template_id;  // DBLP-QuAD only
};

struct IngestStats {
    size_t english_questions = 0;
    std::map<std::string, size_t> queries_per_kg;
    size_t skipped_no_english = 0;
};

struct FormatError : std::runtime_error {
    size_t index;  // item index in the source file
    FormatError(size_t i, const std::string& msg)
        : std::runtime_error(msg + " (item " + std::to_string(i) + ")"), index(i) {}
};

struct IngestResult {
    std::vector<RawItem> items;
    IngestStats stats;
};

/// Parses a QALD-style or DBLP-QuAD-style questions file; queries are
/// attached under kg_name. Items without an English question are skipped
/// (counted in stats).
IngestResult ingest_source(const std::string& path, SourceFormat format,
                           const std::string& kg_name);

/// Joins two ingests by question id; queries merge per KG, the NLQ of the
/// first occurrence wins.
std::vector<RawItem> merge_items(const std::vector<RawItem>& a,
                                 const std::vector<RawItem>& b);

IngestStats combined_stats(const std::vector<RawItem>& items);

/// Drops items whose template_id appears in the exclusion file (one id per
/// line, '#' comments allowed).
std::vector<RawItem> exclude_templates(const std::vector<RawItem>& items,
                                       const std::string& exclusion_file);

struct InsufficientItems : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BuildOptions {
    size_t target_n = 100;
    uint64_t seed = 0;
    std::vector<std::string> include_ids;  // curated items picked first
    std::string name = "benchmark";
    std::string source_split;
    std::string snapshot_note;
};

/// Keeps items whose queries execute on both KGs with non-empty results of
/// matching kind and arity, snapshots the gold answers, and samples
/// target_n deterministically from the seed (include_ids first). Items are
/// emitted in id order, so output bytes are a pure function of the inputs.
DatasetManifest build_benchmark(const std::vector<RawItem>& items,
                                const std::vector<KgProfile>& profiles,
                                const SparqlClient& client,
                                const BuildOptions& options);

struct UnknownCategory : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownId : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Joins categories by item id from a tab-separated "id<TAB>category" file.
DatasetManifest attach_categories(DatasetManifest manifest,
                                  const std::string& category_file);

std::map<std::string, size_t> category_distribution(const DatasetManifest& manifest);

} // namespace sqt

#endif
