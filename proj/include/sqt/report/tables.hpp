#ifndef SQT_REPORT_TABLES_HPP
#define SQT_REPORT_TABLES_HPP

#include <map>
#include <string>
#include <vector>

#include "sqt/bench/manifest.hpp"
#include "sqt/errors/taxonomy.hpp"
#include "sqt/report/records.hpp"

namespace sqt {

struct AccuracyRow {
    std::string direction;
    std::string model;
    std::string strategy;
    size_t correct = 0;
    size_t incorrect = 0;  // includes failed
    size_t failed = 0;     // of which: no comparable result at all

    size_t n() const { return correct + incorrect; }
    double accuracy() const { return n() == 0 ? 0.0 : double(correct) / double(n()); }
};

struct AccuracyTable {
    std::vector<AccuracyRow> rows;  // sorted by (direction, model, strategy)

    size_t total_correct() const;
    size_t total_incorrect() const;
};

AccuracyTable accuracy_table(const std::vector<RunRecord>& records);

/// External reference point printed as a report footnote: the strongest
/// full-scale result reported for this task shape (N=100, large hosted
/// model, few-shot prompting with explicit mappings). Documentation only,
/// never a test expectation.
struct ReferenceResult {
    const char* model;
    const char* strategy;
    const char* direction;
    unsigned correct;
    unsigned n;
};
inline constexpr ReferenceResult kReferenceBestResult = {
    "Mistral-Large-Instruct-2407", "FewShotER", "Wikidata->DBpedia", 86, 100};

/// The three report tables: per-direction error distribution in the fixed
/// row order, per-direction co-occurrence, and mean distinct labels per
/// question category.
struct ErrorReportTables {
    std::vector<std::string> directions;  // column order

    struct DistributionRow {
        ErrorLabel label;
        std::map<std::string, size_t> count_by_direction;
    };
    std::vector<DistributionRow> distribution;  // report_row_order()
    std::map<std::string, size_t> total_by_direction;

    std::map<std::string, CooccurrenceMatrix> cooccurrence_by_direction;

    // direction -> category -> (sum of distinct labels, annotated runs)
    struct CategoryStat {
        size_t label_sum = 0;
        size_t runs = 0;
        double mean() const { return runs == 0 ? 0.0 : double(label_sum) / double(runs); }
    };
    std::map<std::string, std::map<std::string, CategoryStat>> category_stats;
};

/// Annotations are joined to records by run id (the cell key); categories
/// come from the manifest.
ErrorReportTables error_report(const std::vector<Annotation>& annotations,
                               const std::vector<RunRecord>& records,
                               const DatasetManifest& manifest);

} // namespace sqt

#endif
