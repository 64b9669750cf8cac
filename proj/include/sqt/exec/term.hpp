#ifndef SQT_EXEC_TERM_HPP
#define SQT_EXEC_TERM_HPP

#include <optional>
#include <string>

namespace sqt {

/// One RDF term as it appears in a SPARQL results binding.
struct RdfTerm {
    enum class Kind { Iri, Literal, Bnode };

    Kind kind = Kind::Iri;
    std::string value;
    std::optional<std::string> datatype;  // literal only
    std::optional<std::string> lang;      // literal only, exclusive with datatype

    bool operator==(const RdfTerm&) const = default;
    auto operator<=>(const RdfTerm&) const = default;
};

inline RdfTerm iri_term(std::string v) { return {RdfTerm::Kind::Iri, std::move(v), {}, {}}; }
inline RdfTerm literal_term(std::string v) {
    return {RdfTerm::Kind::Literal, std::move(v), {}, {}};
}
inline RdfTerm typed_literal(std::string v, std::string datatype) {
    return {RdfTerm::Kind::Literal, std::move(v), std::move(datatype), {}};
}
inline RdfTerm lang_literal(std::string v, std::string lang) {
    return {RdfTerm::Kind::Literal, std::move(v), {}, std::move(lang)};
}
inline RdfTerm bnode_term(std::string label) {
    return {RdfTerm::Kind::Bnode, std::move(label), {}, {}};
}

/// Canonicalizes a term so that value-equal serializations compare equal:
/// numeric literals by numeric value, language tags lowercased, xsd:string
/// dropped, date/dateTime lexical forms normalized. IRIs and bnodes pass
/// through. Idempotent; unparseable numerics are left lexical.
RdfTerm normalize_term(const RdfTerm& t);

} // namespace sqt

#endif
