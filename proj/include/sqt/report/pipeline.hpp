#ifndef SQT_REPORT_PIPELINE_HPP
#define SQT_REPORT_PIPELINE_HPP

#include <string>
#include <vector>

#include "sqt/bench/manifest.hpp"
#include "sqt/llm/cassette.hpp"
#include "sqt/prompt/prompt.hpp"
#include "sqt/report/records.hpp"

namespace sqt {

/// One declarative description of a run: the full cell matrix is
/// items x models x strategies x directions.
struct RunConfig {
    std::string manifest_path;
    std::string profiles_path;  // empty: built-in profiles
    std::vector<std::pair<std::string, std::string>> directions;
    std::vector<std::string> models;
    std::vector<Strategy> strategies;
    uint64_t seed = 0;

    std::string exemplar_pool_path;     // manifest-shaped pool
    std::string exemplar_vectors_path;  // precomputed vectors
    size_t exemplar_k = 4;

    std::string cassette_path;
    CassetteMode cassette_mode = CassetteMode::Replay;
    double temperature = 0.0;
    size_t max_tokens = 4096;
    size_t parallelism = 4;

    std::string mapping_cache_path;     // er2 source when absent from manifest
    bool allow_alignment_network = false;

    std::string template_dir;  // optional prompt template overrides
    std::string out_dir;
    int exec_timeout_s = 60;
};

RunConfig load_run_config(const std::string& path);

struct PipelineResult {
    std::vector<RunRecord> records;  // canonical cell-key order
    std::string record_digest;
    size_t new_completions = 0;      // cells not served by resume
    size_t resumed = 0;
};

/// Runs every configured cell: er2 assembly, prompt rendering, completion
/// via the cassette, extraction, execution against the target endpoint,
/// exact-match comparison and heuristic error screening. Artifacts land in
/// out_dir (records.jsonl, raw/, failures.jsonl). Cells already present in
/// records.jsonl with an unchanged prompt digest are skipped.
PipelineResult run_pipeline(const RunConfig& config);

} // namespace sqt

#endif
