#ifndef SQT_REPORT_RECORDS_HPP
#define SQT_REPORT_RECORDS_HPP

#include <set>
#include <string>
#include <vector>

#include "sqt/errors/taxonomy.hpp"
#include "sqt/exec/compare.hpp"
#include "sqt/extract/extract.hpp"
#include "sqt/prompt/prompt.hpp"

namespace sqt {

/// One (item, model, strategy, direction) cell of a run. correct implies an
/// empty label set; failed marks cells that never produced a comparable
/// result (extraction, validation, transport or execution trouble) and is a
/// sub-category of incorrect in all accounting.
struct RunRecord {
    std::string item_id;
    std::string model_id;
    Strategy strategy = Strategy::ZeroShot;
    std::string direction;  // "KG1->KG2"

    std::string prompt_digest;
    std::string raw_output_digest;
    std::string extraction_status;  // extracted | failed
    std::string extraction_method;  // sparql_tag | code_fence | keyword_scan | ""
    std::string candidate_query;    // sanitized, empty when unavailable
    std::string failure_stage;      // "" | completion | extraction | validation | execution
    std::string failure_reason;

    bool correct = false;
    bool failed = false;
    bool comparison_equal = false;
    std::string comparison_mode;  // ordered | unordered | boolean | ""
    size_t missing_rows = 0;
    size_t extra_rows = 0;

    std::set<ErrorLabel> error_labels;  // empty when correct

    int64_t total_ms = 0;  // volatile; excluded from digests

    std::string cell_key() const {
        return direction + "|" + model_id + "|" + to_string(strategy) + "|" + item_id;
    }
};

/// Canonical serialization used for the record-set digest: records sorted by
/// cell key, volatile timing fields dropped. Two replay runs over identical
/// inputs digest identically.
std::string records_digest(const std::vector<RunRecord>& records);

void save_records(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> load_records(const std::string& path);

void sort_records(std::vector<RunRecord>& records);

} // namespace sqt

#endif
