#ifndef SQT_BENCH_MANIFEST_HPP
#define SQT_BENCH_MANIFEST_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/align/er2.hpp"
#include "sqt/exec/result_set.hpp"

namespace sqt {

/// The seven question categories of the primary benchmark.
const std::vector<std::string>& question_categories();
bool is_known_category(const std::string& c);

/// One aligned benchmark entry: an English NLQ with a gold query and a gold
/// answer snapshot per KG, optionally a category and per-direction er2.
struct BenchmarkItem {
    std::string id;
    std::string nlq;
    std::map<std::string, std::string> query_by_kg;
    std::map<std::string, ResultSet> gold_by_kg;
    std::optional<std::string> category;
    std::map<std::string, Er2Doc> er2_by_direction;  // keyed "KG1->KG2"

    bool operator==(const BenchmarkItem&) const = default;
};

struct DatasetManifest {
    std::string name;
    std::string source_split;
    std::string snapshot_note;
    std::vector<BenchmarkItem> items;

    size_t count() const { return items.size(); }
    const BenchmarkItem* find(const std::string& id) const {
        for (const auto& item : items)
            if (item.id == id) return &item;
        return nullptr;
    }

    bool operator==(const DatasetManifest&) const = default;
};

struct ManifestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text);
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& m);

} // namespace sqt

#endif
