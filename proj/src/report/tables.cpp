#include "sqt/report/tables.hpp"

#include <algorithm>

namespace sqt {

size_t AccuracyTable::total_correct() const {
    size_t sum = 0;
    for (const auto& row : rows) sum += row.correct;
    return sum;
}

size_t AccuracyTable::total_incorrect() const {
    size_t sum = 0;
    for (const auto& row : rows) sum += row.incorrect;
    return sum;
}

AccuracyTable accuracy_table(const std::vector<RunRecord>& records) {
    std::map<std::tuple<std::string, std::string, std::string>, AccuracyRow> rows;
    for (const auto& r : records) {
        auto key = std::make_tuple(r.direction, r.model_id, to_string(r.strategy));
        auto& row = rows[key];
        row.direction = r.direction;
        row.model = r.model_id;
        row.strategy = to_string(r.strategy);
        if (r.correct) {
            ++row.correct;
        } else {
            ++row.incorrect;
            if (r.failed) ++row.failed;
        }
    }
    AccuracyTable table;
    for (auto& [key, row] : rows) table.rows.push_back(std::move(row));
    return table;
}

ErrorReportTables error_report(const std::vector<Annotation>& annotations,
                               const std::vector<RunRecord>& records,
                               const DatasetManifest& manifest) {
    ErrorReportTables out;

    std::map<std::string, const RunRecord*> record_by_key;
    for (const auto& r : records) {
        record_by_key[r.cell_key()] = &r;
        if (std::find(out.directions.begin(), out.directions.end(), r.direction) ==
            out.directions.end())
            out.directions.push_back(r.direction);
    }
    std::sort(out.directions.begin(), out.directions.end());

    for (ErrorLabel l : report_row_order())
        out.distribution.push_back({l, {}});
    for (const auto& d : out.directions) {
        out.total_by_direction[d] = 0;
        for (auto& row : out.distribution) row.count_by_direction[d] = 0;
        out.cooccurrence_by_direction[d] = {};
    }

    std::map<std::string, std::vector<Annotation>> annotations_by_direction;
    for (const auto& a : annotations) {
        auto it = record_by_key.find(a.run_id);
        if (it == record_by_key.end()) continue;  // stale annotation
        const RunRecord& r = *it->second;
        annotations_by_direction[r.direction].push_back(a);

        for (ErrorLabel l : a.labels) {
            for (auto& row : out.distribution) {
                if (row.label == l) ++row.count_by_direction[r.direction];
            }
            ++out.total_by_direction[r.direction];
        }

        const BenchmarkItem* item = manifest.find(r.item_id);
        std::string category =
            item && item->category ? *item->category : std::string("(uncategorized)");
        auto& stat = out.category_stats[r.direction][category];
        stat.label_sum += a.labels.size();
        ++stat.runs;
    }

    for (const auto& [direction, list] : annotations_by_direction)
        out.cooccurrence_by_direction[direction] = cooccurrence_matrix(list);

    return out;
}

} // namespace sqt
