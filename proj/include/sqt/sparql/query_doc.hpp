#ifndef SQT_SPARQL_QUERY_DOC_HPP
#define SQT_SPARQL_QUERY_DOC_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/sparql/iri.hpp"
#include "sqt/sparql/lexer.hpp"

namespace sqt {

struct KgProfile;  // kg/profile.hpp

enum class QueryForm { Select, Ask, Construct, Describe };
enum class TermRole { Entity, Property, Class, Unknown };
enum class TripleSlot { Subject, Predicate, Object };

std::string to_string(QueryForm f);
std::string to_string(TermRole r);
std::string to_string(TripleSlot s);

struct TermPosition {
    size_t triple_index;
    TripleSlot slot;
    bool operator==(const TermPosition&) const = default;
};

/// One unique IRI with every place it occurs in the query body.
struct TermOccurrence {
    Iri iri;
    TermRole role = TermRole::Unknown;
    std::vector<TermPosition> positions;  // non-empty
};

/// A lexed SPARQL query: enough structure for prefix expansion, term
/// extraction, shape validation and order-sensitivity, not a full parse.
struct QueryDoc {
    std::string raw_text;
    QueryForm form = QueryForm::Select;
    PrefixTable prefixes;
    std::vector<TermOccurrence> terms;  // first-occurrence order, role Unknown until profiled
    std::vector<std::string> projected_vars;  // declaration order, empty for ASK
    bool select_star = false;
    bool order_sensitive = false;  // top-level ORDER BY
    bool has_limit = false;

    // lexer byproducts used by validation and error screening
    bool has_filter_clause = false;
    std::vector<size_t> type_shorthand_triples;  // triples whose predicate is `a`
};

struct LexFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownPrefix : std::runtime_error {
    std::string label;
    explicit UnknownPrefix(std::string l)
        : std::runtime_error("unknown prefix: " + l), label(std::move(l)) {}
};

/// Lexes and lightly parses. Throws LexFailure when no query form keyword is
/// found or brackets/braces are unbalanced (candidate for Query Bad Formed).
QueryDoc parse_query(const std::string& text);

/// Rewrites every prefixed name to an absolute <IRI>, resolving against the
/// query's own declarations plus `defaults` (rdf/rdfs/owl/xsd and any profile
/// prefixes the caller merged in). Prefix declarations are removed from the
/// text. Idempotent. Throws UnknownPrefix for an undeclared non-default label.
QueryDoc expand_prefixes(const QueryDoc& doc,
                         const PrefixTable& defaults = well_known_prefixes());

/// Assigns roles to the terms of a prefix-expanded doc from the profile's
/// namespace lists. Variables, literals and blank nodes never appear.
std::vector<TermOccurrence> extract_terms(const QueryDoc& doc,
                                          const KgProfile& profile);

struct SyntaxFinding {
    std::string code;     // no_query_form | unbalanced_group | missing_group | lex_error
    std::string message;
};

/// ok iff parse_query succeeds and the form-specific shape holds
/// (SELECT/ASK need a group graph pattern). Never throws.
std::vector<SyntaxFinding> validate_syntax(const std::string& text);

inline bool syntax_ok(const std::string& text) { return validate_syntax(text).empty(); }

/// True when the query asserts a type on some subject via `type_property`
/// or the `a` shorthand in predicate position.
bool has_type_assertion(const QueryDoc& doc, const Iri& type_property);

/// True when a top-level FILTER clause is present.
bool has_filter(const QueryDoc& doc);

} // namespace sqt

#endif
