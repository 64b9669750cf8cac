#include "sqt/align/er2.hpp"

#include <algorithm>

#include <json.hpp>

#include "sqt/util/strings.hpp"

namespace sqt {

using nlohmann::json;

std::string to_string(MappingKind k) {
    switch (k) {
        case MappingKind::SameAs: return "sameAs";
        case MappingKind::EquivalentProperty: return "equivalentProperty";
        case MappingKind::EquivalentClass: return "equivalentClass";
        case MappingKind::Orcid: return "orcid";
        default: return "manual";
    }
}

std::string to_string(MappingProvenance p) {
    return p == MappingProvenance::EndpointLookup ? "endpoint_lookup" : "manual_file";
}

MappingKind mapping_kind_from(const std::string& s) {
    if (s == "sameAs") return MappingKind::SameAs;
    if (s == "equivalentProperty") return MappingKind::EquivalentProperty;
    if (s == "equivalentClass") return MappingKind::EquivalentClass;
    if (s == "orcid") return MappingKind::Orcid;
    if (s == "manual") return MappingKind::Manual;
    throw std::runtime_error("unknown mapping kind: " + s);
}

MappingProvenance mapping_provenance_from(const std::string& s) {
    if (s == "endpoint_lookup") return MappingProvenance::EndpointLookup;
    if (s == "manual_file") return MappingProvenance::ManualFile;
    throw std::runtime_error("unknown provenance: " + s);
}

void canonicalize_targets(std::vector<Iri>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

std::string er2_source_key(const std::string& kg_name) {
    return to_lower(kg_name) + "_id";
}

std::string er2_target_key(const std::string& kg_name) {
    return to_lower(kg_name) + "_ids";
}

std::string render_er2(const Er2Doc& doc) {
    std::string src_key = er2_source_key(doc.source_kg);
    std::string tgt_key = er2_target_key(doc.target_kg);

    std::string out = "[";
    bool first_entry = true;
    for (const auto& entry : doc.entries) {
        if (!first_entry) out += ", ";
        first_entry = false;
        out += "{" + json(src_key).dump() + ": " + json(entry.source_id.value).dump();
        out += ", " + json(tgt_key).dump() + ": [";
        bool first_id = true;
        for (const auto& id : entry.target_ids) {
            if (!first_id) out += ", ";
            first_id = false;
            out += json(id.value).dump();
        }
        out += "]}";
    }
    out += "]";
    return out;
}

Er2Doc parse_er2(const std::string& text, const std::string& source_kg,
                 const std::string& target_kg) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw SchemaError(0, "er2 document must be a JSON array");

    std::string src_key = er2_source_key(source_kg);
    std::string tgt_list_key = er2_target_key(target_kg);
    std::string tgt_single_key = to_lower(target_kg) + "_id";

    Er2Doc doc;
    doc.source_kg = source_kg;
    doc.target_kg = target_kg;
    size_t idx = 0;
    for (const auto& e : j) {
        if (!e.is_object()) throw SchemaError(idx, "entry is not an object");
        if (!e.contains(src_key) || !e.at(src_key).is_string())
            throw SchemaError(idx, "missing " + src_key);
        Er2Entry entry;
        entry.source_id = Iri(e.at(src_key).get<std::string>());
        if (e.contains(tgt_list_key)) {
            if (!e.at(tgt_list_key).is_array())
                throw SchemaError(idx, tgt_list_key + " must be an array");
            for (const auto& id : e.at(tgt_list_key))
                entry.target_ids.emplace_back(id.get<std::string>());
        } else if (e.contains(tgt_single_key)) {
            const auto& v = e.at(tgt_single_key);
            if (v.is_string()) {
                entry.target_ids.emplace_back(v.get<std::string>());
            } else if (v.is_array()) {
                for (const auto& id : v) entry.target_ids.emplace_back(id.get<std::string>());
            } else {
                throw SchemaError(idx, tgt_single_key + " must be a string or array");
            }
        } else {
            throw SchemaError(idx, "missing " + tgt_list_key);
        }
        doc.entries.push_back(std::move(entry));
        ++idx;
    }
    return doc;
}

} // namespace sqt
