#include "sqt/errors/taxonomy.hpp"

#include <algorithm>

#include <json.hpp>

#include "sqt/util/jsonl.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

namespace {

const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

std::string local_id(const Iri& iri) {
    size_t pos = iri.value.find_last_of("/#");
    return pos == std::string::npos ? iri.value : iri.value.substr(pos + 1);
}

bool in_any(const Iri& iri, const std::vector<Iri>& namespaces) {
    for (const auto& ns : namespaces)
        if (starts_with(iri.value, ns.value)) return true;
    return false;
}

// Wikidata publishes its property ids both as wd:P57 and wdt:P57; numeric-id
// KGs therefore compare by local id across their own namespaces, while
// human-readable KGs compare by full IRI.
bool target_ids_equivalent(const Iri& a, const Iri& b, const KgProfile& target) {
    if (a == b) return true;
    if (target.identifier_style != IdentifierStyle::Numeric) return false;
    return target.owns(a) && target.owns(b) && local_id(a) == local_id(b);
}

// P-shaped ids inside an entity namespace (wd:P57) denote properties.
bool property_shaped(const Iri& iri, const KgProfile& target) {
    if (in_any(iri, target.property_namespaces)) return true;
    if (target.identifier_style == IdentifierStyle::Numeric &&
        in_any(iri, target.entity_namespaces)) {
        std::string id = local_id(iri);
        if (id.size() >= 2 && id[0] == 'P' &&
            std::all_of(id.begin() + 1, id.end(),
                        [](char c) { return std::isdigit((unsigned char)c); }))
            return true;
    }
    return false;
}

// triple indices carrying a type assertion in this doc, for slot tests
std::vector<size_t> type_triples_of(const QueryDoc& doc, const KgProfile& target) {
    std::vector<size_t> triples = doc.type_shorthand_triples;
    for (const auto& term : doc.terms) {
        if (term.iri.value != target.type_property.value && term.iri.value != kRdfType)
            continue;
        for (const auto& pos : term.positions)
            if (pos.slot == TripleSlot::Predicate) triples.push_back(pos.triple_index);
    }
    return triples;
}

bool is_type_object_pos(const TermPosition& pos, const std::vector<size_t>& type_triples) {
    return pos.slot == TripleSlot::Object &&
           std::find(type_triples.begin(), type_triples.end(), pos.triple_index) !=
               type_triples.end();
}

} // namespace

std::string to_string(ErrorLabel l) {
    switch (l) {
        case ErrorLabel::UnadaptedDatasetPatterns: return "UnadaptedDatasetPatterns";
        case ErrorLabel::QueryBadFormed: return "QueryBadFormed";
        case ErrorLabel::PropertyAsEntity: return "PropertyAsEntity";
        case ErrorLabel::EntityAsProperty: return "EntityAsProperty";
        case ErrorLabel::MissingTypeAssertion: return "MissingTypeAssertion";
        case ErrorLabel::WrongOrMissingProperty: return "WrongOrMissingProperty";
        case ErrorLabel::WrongOrMissingEntity: return "WrongOrMissingEntity";
        default: return "StructuralError";
    }
}

std::optional<ErrorLabel> error_label_from(const std::string& s) {
    for (ErrorLabel l : kAllErrorLabels)
        if (to_string(l) == s) return l;
    return std::nullopt;
}

std::string display_label(ErrorLabel l, const KgProfile& target) {
    bool numeric = target.identifier_style == IdentifierStyle::Numeric;
    switch (l) {
        case ErrorLabel::UnadaptedDatasetPatterns: return "Unadapted Dataset Patterns";
        case ErrorLabel::QueryBadFormed: return "Query Bad Formed Error";
        case ErrorLabel::PropertyAsEntity:
            return numeric ? "Property Treated as Entity" : "Ontology Treated as Resource";
        case ErrorLabel::EntityAsProperty:
            return numeric ? "Entity Treated as Property" : "Resource Treated as Ontology";
        case ErrorLabel::MissingTypeAssertion:
            return "Missing " + (target.type_property.value == kRdfType
                                     ? std::string("rdf:type")
                                     : local_id(target.type_property));
        case ErrorLabel::WrongOrMissingProperty:
            return numeric ? "Wrong or Missing Property" : "Wrong or Missing Ontology";
        case ErrorLabel::WrongOrMissingEntity:
            return numeric ? "Wrong or Missing Entity" : "Wrong or Missing Resource";
        default: return "Structural Error";
    }
}

const std::array<ErrorLabel, 8>& report_row_order() {
    static const std::array<ErrorLabel, 8> order = {
        ErrorLabel::StructuralError,          ErrorLabel::WrongOrMissingEntity,
        ErrorLabel::WrongOrMissingProperty,   ErrorLabel::QueryBadFormed,
        ErrorLabel::MissingTypeAssertion,     ErrorLabel::UnadaptedDatasetPatterns,
        ErrorLabel::PropertyAsEntity,         ErrorLabel::EntityAsProperty};
    return order;
}

std::string to_string(AnnotationSource s) {
    switch (s) {
        case AnnotationSource::Heuristic: return "heuristic";
        case AnnotationSource::Manual: return "manual";
        default: return "merged";
    }
}

AnnotationSource annotation_source_from(const std::string& s) {
    if (s == "heuristic") return AnnotationSource::Heuristic;
    if (s == "manual") return AnnotationSource::Manual;
    if (s == "merged") return AnnotationSource::Merged;
    throw std::runtime_error("unknown annotation source: " + s);
}

std::set<ErrorLabel> prescreen(const PrescreenInput& input,
                               const TranslationDirection& direction) {
    std::set<ErrorLabel> labels;
    const KgProfile& source = direction.source;
    const KgProfile& target = direction.target;

    // (1) unadapted: any source-KG namespace appears in the candidate text
    auto scan_namespaces = [&](const std::vector<Iri>& namespaces) {
        for (const auto& ns : namespaces)
            if (input.candidate_text.find(ns.value) != std::string::npos) return true;
        return false;
    };
    if (scan_namespaces(source.entity_namespaces) ||
        scan_namespaces(source.property_namespaces) ||
        scan_namespaces(source.class_namespaces))
        labels.insert(ErrorLabel::UnadaptedDatasetPatterns);

    // (2) bad formed: the candidate never parsed/validated
    if (input.candidate_doc == nullptr) {
        labels.insert(ErrorLabel::QueryBadFormed);
        return labels;  // slot/term heuristics need a parse
    }
    const QueryDoc& cand = *input.candidate_doc;
    auto cand_terms = extract_terms(cand, target);
    auto cand_type_triples = type_triples_of(cand, target);

    // (3)/(4) slot misuse within the target vocabulary
    bool property_shaped_predicate = false;
    for (const auto& term : cand_terms) {
        bool shaped = property_shaped(term.iri, target);
        bool entity_ns = in_any(term.iri, target.entity_namespaces);
        bool class_ns = in_any(term.iri, target.class_namespaces);
        for (const auto& pos : term.positions) {
            bool type_obj = is_type_object_pos(pos, cand_type_triples);
            if (pos.slot != TripleSlot::Predicate) {
                // a property or ontology term sitting where a resource belongs
                if ((shaped || class_ns) && !type_obj)
                    labels.insert(ErrorLabel::PropertyAsEntity);
                // a resource used as the class of a type assertion
                if (entity_ns && !shaped && type_obj && !class_ns &&
                    !target.class_namespaces.empty())
                    labels.insert(ErrorLabel::EntityAsProperty);
            } else {
                if (entity_ns && !shaped)
                    labels.insert(ErrorLabel::EntityAsProperty);
                if (entity_ns && shaped) property_shaped_predicate = true;
            }
        }
    }

    // (5) missing type assertion
    if (input.gold_target_doc &&
        has_type_assertion(*input.gold_target_doc, target.type_property) &&
        !has_type_assertion(cand, target.type_property))
        labels.insert(ErrorLabel::MissingTypeAssertion);

    // (6)/(7) er2-image coverage
    bool wrong_property = false, wrong_entity = false;
    if (input.er2 != nullptr) {
        // roles of the er2 source terms, from the gold source query
        std::map<std::string, TermRole> source_roles;
        if (input.gold_source_doc)
            for (const auto& t : extract_terms(*input.gold_source_doc, source))
                source_roles[t.iri.value] = t.role;

        auto has_equivalent = [&](const Iri& wanted) {
            for (const auto& t : cand_terms)
                if (target_ids_equivalent(t.iri, wanted, target)) return true;
            return false;
        };

        std::vector<Iri> justified;  // every mapped target id
        for (const auto& entry : input.er2->entries)
            for (const auto& id : entry.target_ids) justified.push_back(id);

        for (const auto& entry : input.er2->entries) {
            if (entry.target_ids.empty()) continue;  // unmapped: cannot judge
            TermRole role = TermRole::Unknown;
            if (auto it = source_roles.find(entry.source_id.value);
                it != source_roles.end())
                role = it->second;
            else if (in_any(entry.source_id, source.property_namespaces) ||
                     in_any(entry.source_id, source.class_namespaces))
                role = TermRole::Property;
            else if (in_any(entry.source_id, source.entity_namespaces))
                role = TermRole::Entity;

            bool any_present = false;
            for (const auto& id : entry.target_ids)
                if (has_equivalent(id)) any_present = true;
            if (any_present) continue;
            if (role == TermRole::Property || role == TermRole::Class)
                wrong_property = true;
            else if (role == TermRole::Entity)
                wrong_entity = true;
        }

        // superfluous target-vocabulary terms that no mapping justifies
        for (const auto& t : cand_terms) {
            if (!target.owns(t.iri)) continue;
            if (t.iri.value == target.type_property.value || t.iri.value == kRdfType)
                continue;
            bool justified_term = false;
            for (const auto& id : justified)
                if (target_ids_equivalent(t.iri, id, target)) justified_term = true;
            if (justified_term) continue;
            bool only_type_object = !t.positions.empty() &&
                                    std::all_of(t.positions.begin(), t.positions.end(),
                                                [&](const TermPosition& p) {
                                                    return is_type_object_pos(
                                                        p, cand_type_triples);
                                                });
            if (only_type_object) continue;  // added typing is a structural choice
            if (t.role == TermRole::Property || t.role == TermRole::Class)
                wrong_property = true;
            else if (t.role == TermRole::Entity)
                wrong_entity = true;
        }
    }
    if (wrong_property) labels.insert(ErrorLabel::WrongOrMissingProperty);
    if (wrong_entity) labels.insert(ErrorLabel::WrongOrMissingEntity);

    // (8) structural: logical shape inconsistent with the target model
    bool structural = false;
    if (input.gold_target_doc && input.gold_target_doc->form != cand.form)
        structural = true;
    if (input.gold_target_doc && has_filter(*input.gold_target_doc) && !has_filter(cand))
        structural = true;
    if (input.execution_error) structural = true;
    if (input.candidate_empty) structural = true;
    if (property_shaped_predicate) structural = true;
    if (!input.comparison_equal && !wrong_property && !wrong_entity) structural = true;
    if (structural) labels.insert(ErrorLabel::StructuralError);

    if (labels.empty()) labels.insert(ErrorLabel::StructuralError);
    return labels;
}

Annotation merge_annotations(const Annotation& heuristic,
                             const std::optional<Annotation>& manual) {
    if (!manual) return heuristic;
    if (manual->run_id != heuristic.run_id)
        throw IdMismatch("annotation run ids differ: " + heuristic.run_id + " vs " +
                         manual->run_id);
    Annotation merged = *manual;
    merged.source = AnnotationSource::Merged;
    std::string heuristic_labels;
    for (ErrorLabel l : heuristic.labels) {
        if (!heuristic_labels.empty()) heuristic_labels += ",";
        heuristic_labels += to_string(l);
    }
    merged.notes = manual->notes.empty()
                       ? "heuristic: [" + heuristic_labels + "]"
                       : manual->notes + " | heuristic: [" + heuristic_labels + "]";
    return merged;
}

double CooccurrenceMatrix::percentage(ErrorLabel a, ErrorLabel b) const {
    size_t total = counts[size_t(a)][size_t(a)];
    if (total == 0) return 0.0;
    return 100.0 * double(counts[size_t(a)][size_t(b)]) / double(total);
}

CooccurrenceMatrix cooccurrence_matrix(const std::vector<Annotation>& annotations) {
    CooccurrenceMatrix m;
    for (const auto& a : annotations) {
        for (ErrorLabel x : a.labels)
            for (ErrorLabel y : a.labels) ++m.counts[size_t(x)][size_t(y)];
    }
    return m;
}

void save_annotations(const std::string& path, const std::vector<Annotation>& annotations) {
    write_file(path, "");
    for (const auto& a : annotations) {
        nlohmann::ordered_json j;
        j["run_id"] = a.run_id;
        auto labels = nlohmann::ordered_json::array();
        for (ErrorLabel l : a.labels) labels.push_back(to_string(l));
        j["labels"] = labels;
        j["source"] = to_string(a.source);
        j["notes"] = a.notes;
        j["annotator"] = a.annotator;
        j["timestamp"] = a.timestamp;
        append_jsonl(path, j);
    }
}

std::vector<Annotation> load_annotations(const std::string& path) {
    std::vector<Annotation> out;
    read_jsonl(path, [&](const nlohmann::json& j, size_t line) {
        Annotation a;
        a.run_id = j.at("run_id").get<std::string>();
        for (const auto& l : j.at("labels")) {
            auto label = error_label_from(l.get<std::string>());
            if (!label)
                throw std::runtime_error(path + ":" + std::to_string(line) +
                                         ": unknown label " + l.get<std::string>());
            a.labels.insert(*label);
        }
        a.source = annotation_source_from(j.value("source", "heuristic"));
        a.notes = j.value("notes", "");
        a.annotator = j.value("annotator", "");
        a.timestamp = j.value("timestamp", "");
        out.push_back(std::move(a));
    });
    return out;
}

} // namespace sqt
