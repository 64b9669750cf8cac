#include "sqt/report/records.hpp"

#include <algorithm>

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/sha256.hpp"

namespace sqt {

using nlohmann::ordered_json;

namespace {

ordered_json record_to_json(const RunRecord& r, bool include_volatile) {
    ordered_json j;
    j["item_id"] = r.item_id;
    j["model_id"] = r.model_id;
    j["strategy"] = to_string(r.strategy);
    j["direction"] = r.direction;
    j["prompt_digest"] = r.prompt_digest;
    j["raw_output_digest"] = r.raw_output_digest;
    j["extraction_status"] = r.extraction_status;
    j["extraction_method"] = r.extraction_method;
    j["candidate_query"] = r.candidate_query;
    j["failure_stage"] = r.failure_stage;
    j["failure_reason"] = r.failure_reason;
    j["correct"] = r.correct;
    j["failed"] = r.failed;
    j["comparison_equal"] = r.comparison_equal;
    j["comparison_mode"] = r.comparison_mode;
    j["missing_rows"] = r.missing_rows;
    j["extra_rows"] = r.extra_rows;
    auto labels = ordered_json::array();
    for (ErrorLabel l : r.error_labels) labels.push_back(to_string(l));
    j["error_labels"] = labels;
    if (include_volatile) j["total_ms"] = r.total_ms;
    return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.strategy = *strategy_from(j.at("strategy").get<std::string>());
    r.direction = j.at("direction").get<std::string>();
    r.prompt_digest = j.value("prompt_digest", "");
    r.raw_output_digest = j.value("raw_output_digest", "");
    r.extraction_status = j.value("extraction_status", "");
    r.extraction_method = j.value("extraction_method", "");
    r.candidate_query = j.value("candidate_query", "");
    r.failure_stage = j.value("failure_stage", "");
    r.failure_reason = j.value("failure_reason", "");
    r.correct = j.value("correct", false);
    r.failed = j.value("failed", false);
    r.comparison_equal = j.value("comparison_equal", false);
    r.comparison_mode = j.value("comparison_mode", "");
    r.missing_rows = j.value("missing_rows", size_t(0));
    r.extra_rows = j.value("extra_rows", size_t(0));
    if (j.contains("error_labels"))
        for (const auto& l : j.at("error_labels"))
            r.error_labels.insert(*error_label_from(l.get<std::string>()));
    r.total_ms = j.value("total_ms", int64_t(0));
    return r;
}

} // namespace

void sort_records(std::vector<RunRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const RunRecord& a, const RunRecord& b) {
                  return a.cell_key() < b.cell_key();
              });
}

std::string records_digest(const std::vector<RunRecord>& records) {
    std::vector<RunRecord> sorted = records;
    sort_records(sorted);
    Sha256 h;
    for (const auto& r : sorted) {
        h.update(record_to_json(r, /*include_volatile=*/false).dump());
        h.update("\n");
    }
    return h.hex_digest();
}

void save_records(const std::string& path, const std::vector<RunRecord>& records) {
    std::vector<RunRecord> sorted = records;
    sort_records(sorted);
    std::string out;
    for (const auto& r : sorted) out += record_to_json(r, true).dump() + "\n";
    write_file(path, out);
}

std::vector<RunRecord> load_records(const std::string& path) {
    std::vector<RunRecord> out;
    read_jsonl(path, [&](const nlohmann::json& j, size_t) {
        out.push_back(record_from_json(j));
    });
    return out;
}

} // namespace sqt
