#include "sqt/bench/manifest.hpp"

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

using nlohmann::ordered_json;

const std::vector<std::string>& question_categories() {
    static const std::vector<std::string> categories = {
        "Single Fact",     "Comprehensive List",   "Aggregated List",
        "Single Person",   "Rank or Ordered Info.", "Numerical Count",
        "Filtered Multi-Entity"};
    return categories;
}

bool is_known_category(const std::string& c) {
    for (const auto& known : question_categories())
        if (known == c) return true;
    return false;
}

std::string manifest_to_json(const DatasetManifest& m) {
    ordered_json j;
    j["schema_version"] = 1;
    j["name"] = m.name;
    j["source_split"] = m.source_split;
    j["snapshot_note"] = m.snapshot_note;
    j["count"] = m.items.size();
    auto items = ordered_json::array();
    for (const auto& item : m.items) {
        ordered_json ji;
        ji["id"] = item.id;
        ji["nlq"] = item.nlq;
        ordered_json queries = ordered_json::object();
        for (const auto& [kg, q] : item.query_by_kg) queries[kg] = q;
        ji["queries"] = queries;
        ordered_json gold = ordered_json::object();
        for (const auto& [kg, rs] : item.gold_by_kg)
            gold[kg] = ordered_json::parse(results_to_json(rs));
        ji["gold"] = gold;
        if (item.category) ji["category"] = *item.category;
        if (!item.er2_by_direction.empty()) {
            ordered_json er2 = ordered_json::object();
            for (const auto& [direction, doc] : item.er2_by_direction)
                er2[direction] = ordered_json::parse(render_er2(doc));
            ji["er2"] = er2;
        }
        items.push_back(std::move(ji));
    }
    j["items"] = items;
    return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ManifestError("manifest is not valid JSON");
    if (!j.contains("items") || !j["items"].is_array())
        throw ManifestError("manifest missing items array");

    DatasetManifest m;
    m.name = j.value("name", "");
    m.source_split = j.value("source_split", "");
    m.snapshot_note = j.value("snapshot_note", "");

    for (const auto& ji : j["items"]) {
        BenchmarkItem item;
        item.id = ji.at("id").get<std::string>();
        item.nlq = ji.at("nlq").get<std::string>();
        if (ji.contains("queries"))
            for (const auto& [kg, q] : ji.at("queries").items())
                item.query_by_kg[kg] = q.get<std::string>();
        if (ji.contains("gold"))
            for (const auto& [kg, rs] : ji.at("gold").items())
                item.gold_by_kg[kg] = parse_results_json(rs.dump());
        if (ji.contains("category")) {
            std::string c = ji.at("category").get<std::string>();
            if (!is_known_category(c))
                throw ManifestError("unknown category in manifest: " + c);
            item.category = c;
        }
        if (ji.contains("er2")) {
            for (const auto& [direction, arr] : ji.at("er2").items()) {
                auto parts = split(direction, '>');
                if (parts.size() != 2 || parts[0].empty() || parts[0].back() != '-')
                    throw ManifestError("bad direction key: " + direction);
                std::string source = parts[0].substr(0, parts[0].size() - 1);
                item.er2_by_direction[direction] =
                    parse_er2(arr.dump(), source, parts[1]);
            }
        }
        m.items.push_back(std::move(item));
    }

    // ids unique
    for (size_t i = 0; i < m.items.size(); ++i)
        for (size_t k = i + 1; k < m.items.size(); ++k)
            if (m.items[i].id == m.items[k].id)
                throw ManifestError("duplicate item id: " + m.items[i].id);
    return m;
}

DatasetManifest load_manifest(const std::string& path) {
    return manifest_from_json(read_file(path));
}

void save_manifest(const std::string& path, const DatasetManifest& m) {
    write_file(path, manifest_to_json(m));
}

} // namespace sqt
