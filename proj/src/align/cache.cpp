#include "sqt/align/cache.hpp"

#include <json.hpp>

#include "sqt/util/jsonl.hpp"

namespace sqt {

using nlohmann::ordered_json;

MappingCache::MappingCache(std::string path) : path_(std::move(path)) {
    read_jsonl(path_, [&](const nlohmann::json& j, size_t) {
        TermMapping m;
        m.source_id = Iri(j.at("source_id").get<std::string>());
        for (const auto& id : j.at("target_ids"))
            m.target_ids.emplace_back(id.get<std::string>());
        m.kind = mapping_kind_from(j.at("kind").get<std::string>());
        m.provenance = mapping_provenance_from(j.at("provenance").get<std::string>());
        m.retrieved_at = j.value("retrieved_at", "");
        Key key{m.source_id.value, j.at("target_kg").get<std::string>()};
        auto& dest = m.provenance == MappingProvenance::ManualFile ? manual_entries_
                                                                   : endpoint_entries_;
        dest[key] = std::move(m);  // later records win
    });
}

std::optional<TermMapping> MappingCache::lookup(const Iri& source_id,
                                                const std::string& target_kg) const {
    std::lock_guard lock(mutex_);
    Key key{source_id.value, target_kg};
    if (auto it = manual_entries_.find(key); it != manual_entries_.end())
        return it->second;
    if (auto it = endpoint_entries_.find(key); it != endpoint_entries_.end())
        return it->second;
    return std::nullopt;
}

void MappingCache::store(const TermMapping& mapping, const std::string& target_kg) {
    std::lock_guard lock(mutex_);
    Key key{mapping.source_id.value, target_kg};
    auto& dest = mapping.provenance == MappingProvenance::ManualFile ? manual_entries_
                                                                     : endpoint_entries_;
    dest[key] = mapping;

    if (path_.empty()) return;
    ordered_json j;
    j["source_id"] = mapping.source_id.value;
    j["target_kg"] = target_kg;
    auto ids = ordered_json::array();
    for (const auto& id : mapping.target_ids) ids.push_back(id.value);
    j["target_ids"] = ids;
    j["kind"] = to_string(mapping.kind);
    j["provenance"] = to_string(mapping.provenance);
    j["retrieved_at"] = mapping.retrieved_at;
    append_jsonl(path_, j);
}

size_t MappingCache::size() const {
    std::lock_guard lock(mutex_);
    return endpoint_entries_.size() + manual_entries_.size();
}

} // namespace sqt
