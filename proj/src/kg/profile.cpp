#include "sqt/kg/profile.hpp"

#include <cstdlib>

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

using nlohmann::ordered_json;

std::string to_string(IdentifierStyle s) {
    return s == IdentifierStyle::HumanReadable ? "human_readable" : "numeric";
}

IdentifierStyle identifier_style_from(const std::string& s) {
    if (s == "human_readable") return IdentifierStyle::HumanReadable;
    if (s == "numeric") return IdentifierStyle::Numeric;
    throw ConfigError("identifier_style", "expected human_readable or numeric, got " + s);
}

std::string KgProfile::effective_endpoint() const {
    std::string var = "SPARQL_ENDPOINT_" + to_upper(name);
    if (const char* env = std::getenv(var.c_str()); env && *env) return env;
    return endpoint_url;
}

bool KgProfile::owns(const Iri& iri) const {
    auto any = [&](const std::vector<Iri>& list) {
        for (const auto& ns : list)
            if (starts_with(iri.value, ns.value)) return true;
        return false;
    };
    return any(entity_namespaces) || any(property_namespaces) || any(class_namespaces);
}

std::vector<KgProfile> builtin_profiles() {
    std::vector<KgProfile> out;

    {
        KgProfile p;
        p.name = "DBpedia";
        p.endpoint_url = "https://dbpedia.org/sparql";
        p.entity_namespaces = {Iri("http://dbpedia.org/resource/")};
        p.property_namespaces = {Iri("http://dbpedia.org/ontology/"),
                                 Iri("http://dbpedia.org/property/")};
        p.class_namespaces = {Iri("http://dbpedia.org/ontology/")};
        p.type_property = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
        p.identifier_style = IdentifierStyle::HumanReadable;
        p.prefixes.set("dbo", Iri("http://dbpedia.org/ontology/"));
        p.prefixes.set("dbr", Iri("http://dbpedia.org/resource/"));
        p.prefixes.set("res", Iri("http://dbpedia.org/resource/"));
        p.prefixes.set("dbp", Iri("http://dbpedia.org/property/"));
        out.push_back(std::move(p));
    }
    {
        KgProfile p;
        p.name = "Wikidata";
        p.endpoint_url = "https://query.wikidata.org/sparql";
        p.entity_namespaces = {Iri("http://www.wikidata.org/entity/")};
        p.property_namespaces = {Iri("http://www.wikidata.org/prop/direct/"),
                                 Iri("http://www.wikidata.org/prop/statement/"),
                                 Iri("http://www.wikidata.org/prop/qualifier/"),
                                 Iri("http://www.wikidata.org/prop/")};
        // Wikidata classes are ordinary items (wd:Q5) and stay role=entity;
        // their cross-KG links are owl:sameAs, not equivalentClass.
        p.class_namespaces = {};
        p.type_property = Iri("http://www.wikidata.org/prop/direct/P31");
        p.identifier_style = IdentifierStyle::Numeric;
        p.prefixes.set("wd", Iri("http://www.wikidata.org/entity/"));
        p.prefixes.set("wdt", Iri("http://www.wikidata.org/prop/direct/"));
        p.prefixes.set("p", Iri("http://www.wikidata.org/prop/"));
        p.prefixes.set("ps", Iri("http://www.wikidata.org/prop/statement/"));
        p.prefixes.set("pq", Iri("http://www.wikidata.org/prop/qualifier/"));
        out.push_back(std::move(p));
    }
    {
        KgProfile p;
        p.name = "DBLP";
        p.endpoint_url = "https://sparql.dblp.org/sparql";
        p.entity_namespaces = {Iri("https://dblp.org/rec/"), Iri("https://dblp.org/pid/")};
        p.property_namespaces = {Iri("https://dblp.org/rdf/schema#")};
        p.class_namespaces = {Iri("https://dblp.org/rdf/schema#")};
        p.type_property = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
        p.identifier_style = IdentifierStyle::HumanReadable;
        p.prefixes.set("dblp", Iri("https://dblp.org/rdf/schema#"));
        out.push_back(std::move(p));
    }
    {
        KgProfile p;
        p.name = "OpenAlex";
        p.endpoint_url = "https://semopenalex.org/sparql";
        p.entity_namespaces = {Iri("https://semopenalex.org/work/"),
                               Iri("https://semopenalex.org/author/"),
                               Iri("https://semopenalex.org/institution/"),
                               Iri("https://semopenalex.org/source/"),
                               Iri("https://semopenalex.org/concept/")};
        p.property_namespaces = {Iri("https://semopenalex.org/ontology/")};
        p.class_namespaces = {Iri("https://semopenalex.org/ontology/")};
        p.type_property = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
        p.identifier_style = IdentifierStyle::Numeric;
        p.prefixes.set("oa", Iri("https://semopenalex.org/ontology/"));
        out.push_back(std::move(p));
    }
    return out;
}

const KgProfile& builtin_profile(const std::string& name) {
    static const std::vector<KgProfile> profiles = builtin_profiles();
    for (const auto& p : profiles)
        if (p.name == name) return p;
    throw ConfigError("name", "no built-in profile named " + name);
}

namespace {

std::vector<Iri> iri_list(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of IRIs");
    std::vector<Iri> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ConfigError(path, "expected string IRIs");
        out.emplace_back(v.get<std::string>());
    }
    return out;
}

KgProfile profile_from_json(const ordered_json& j, const std::string& path) {
    auto require = [&](const char* key) -> const ordered_json& {
        if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
        return j.at(key);
    };
    KgProfile p;
    p.name = require("name").get<std::string>();
    p.endpoint_url = require("endpoint_url").get<std::string>();
    p.entity_namespaces = iri_list(require("entity_namespaces"), path + ".entity_namespaces");
    p.property_namespaces =
        iri_list(require("property_namespaces"), path + ".property_namespaces");
    p.class_namespaces = iri_list(require("class_namespaces"), path + ".class_namespaces");
    p.type_property = Iri(require("type_property").get<std::string>());
    if (p.type_property.value.empty())
        throw ConfigError(path + ".type_property", "must be non-empty");
    p.identifier_style = identifier_style_from(require("identifier_style").get<std::string>());
    if (j.contains("prefixes")) {
        for (const auto& [label, base] : j.at("prefixes").items())
            p.prefixes.set(label, Iri(base.get<std::string>()));
    }
    return p;
}

ordered_json profile_to_json(const KgProfile& p) {
    ordered_json j;
    j["name"] = p.name;
    j["endpoint_url"] = p.endpoint_url;
    auto iris = [](const std::vector<Iri>& list) {
        ordered_json a = ordered_json::array();
        for (const auto& iri : list) a.push_back(iri.value);
        return a;
    };
    j["entity_namespaces"] = iris(p.entity_namespaces);
    j["property_namespaces"] = iris(p.property_namespaces);
    j["class_namespaces"] = iris(p.class_namespaces);
    j["type_property"] = p.type_property.value;
    j["identifier_style"] = to_string(p.identifier_style);
    ordered_json prefixes = ordered_json::object();
    for (const auto& [label, base] : p.prefixes.entries()) prefixes[label] = base.value;
    j["prefixes"] = prefixes;
    return j;
}

} // namespace

std::vector<KgProfile> profiles_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("", "profile file is not valid JSON");
    const ordered_json* list = &j;
    if (j.is_object()) {
        if (!j.contains("profiles")) throw ConfigError("profiles", "missing field");
        list = &j.at("profiles");
    }
    if (!list->is_array()) throw ConfigError("profiles", "expected an array");
    std::vector<KgProfile> out;
    size_t idx = 0;
    for (const auto& entry : *list) {
        out.push_back(profile_from_json(entry, "profiles[" + std::to_string(idx) + "]"));
        ++idx;
    }
    return out;
}

std::vector<KgProfile> load_profiles(const std::string& path) {
    return profiles_from_json(read_file(path));
}

std::string profiles_to_json(const std::vector<KgProfile>& profiles) {
    ordered_json j;
    j["profiles"] = ordered_json::array();
    for (const auto& p : profiles) j["profiles"].push_back(profile_to_json(p));
    return j.dump(2) + "\n";
}

} // namespace sqt
