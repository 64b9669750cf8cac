#include "sqt/exec/result_set.hpp"

#include <json.hpp>

namespace sqt {

using nlohmann::ordered_json;

ResultSet parse_results_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw MalformedResponse("response is not valid JSON");

    ResultSet rs;
    if (j.contains("boolean")) {
        if (!j["boolean"].is_boolean())
            throw MalformedResponse("boolean field is not a boolean");
        rs.kind = ResultSet::Kind::Boolean;
        rs.boolean_value = j["boolean"].get<bool>();
        return rs;
    }
    if (!j.contains("head") || !j["head"].is_object())
        throw MalformedResponse("missing head object");
    if (!j.contains("results") || !j["results"].is_object() ||
        !j["results"].contains("bindings"))
        throw MalformedResponse("missing results.bindings");

    rs.kind = ResultSet::Kind::Bindings;
    if (j["head"].contains("vars")) {
        for (const auto& v : j["head"]["vars"]) {
            if (!v.is_string()) throw MalformedResponse("head.vars entries must be strings");
            rs.variables.push_back(v.get<std::string>());
        }
    }
    for (const auto& binding : j["results"]["bindings"]) {
        if (!binding.is_object()) throw MalformedResponse("binding is not an object");
        std::map<std::string, RdfTerm> row;
        for (const auto& [var, cell] : binding.items()) {
            if (!cell.is_object() || !cell.contains("type") || !cell.contains("value"))
                throw MalformedResponse("binding cell missing type/value");
            std::string type = cell["type"].get<std::string>();
            RdfTerm term;
            term.value = cell["value"].get<std::string>();
            if (type == "uri") {
                term.kind = RdfTerm::Kind::Iri;
            } else if (type == "literal" || type == "typed-literal") {
                term.kind = RdfTerm::Kind::Literal;
                if (cell.contains("datatype"))
                    term.datatype = cell["datatype"].get<std::string>();
                if (cell.contains("xml:lang"))
                    term.lang = cell["xml:lang"].get<std::string>();
            } else if (type == "bnode") {
                term.kind = RdfTerm::Kind::Bnode;
            } else {
                throw MalformedResponse("unknown term type: " + type);
            }
            row.emplace(var, std::move(term));
        }
        rs.rows.push_back(std::move(row));
    }
    return rs;
}

std::string results_to_json(const ResultSet& rs, int indent) {
    ordered_json j;
    if (rs.kind == ResultSet::Kind::Boolean) {
        j["head"] = ordered_json::object();
        j["boolean"] = rs.boolean_value;
        return j.dump(indent);
    }
    j["head"]["vars"] = rs.variables;
    ordered_json bindings = ordered_json::array();
    for (const auto& row : rs.rows) {
        ordered_json b = ordered_json::object();
        for (const auto& [var, term] : row) {
            ordered_json cell;
            switch (term.kind) {
                case RdfTerm::Kind::Iri: cell["type"] = "uri"; break;
                case RdfTerm::Kind::Literal: cell["type"] = "literal"; break;
                case RdfTerm::Kind::Bnode: cell["type"] = "bnode"; break;
            }
            cell["value"] = term.value;
            if (term.datatype) cell["datatype"] = *term.datatype;
            if (term.lang) cell["xml:lang"] = *term.lang;
            b[var] = cell;
        }
        bindings.push_back(std::move(b));
    }
    j["results"]["bindings"] = bindings;
    return j.dump(indent);
}

ResultSet boolean_result(bool value) {
    ResultSet rs;
    rs.kind = ResultSet::Kind::Boolean;
    rs.boolean_value = value;
    return rs;
}

ResultSet normalize_result_set(const ResultSet& rs) {
    ResultSet out = rs;
    for (auto& row : out.rows)
        for (auto& [var, term] : row) term = normalize_term(term);
    return out;
}

} // namespace sqt
