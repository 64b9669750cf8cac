#ifndef SQT_EXEC_RESULT_SET_HPP
#define SQT_EXEC_RESULT_SET_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/exec/term.hpp"

namespace sqt {

/// A SPARQL result: variable bindings or an ASK boolean. Rows hold only the
/// bound variables of each solution (OPTIONAL may leave cells absent).
struct ResultSet {
    enum class Kind { Bindings, Boolean };

    Kind kind = Kind::Bindings;
    std::vector<std::string> variables;          // bindings only, header order
    std::vector<std::map<std::string, RdfTerm>> rows;
    bool boolean_value = false;                  // boolean only

    bool empty() const {
        return kind == Kind::Bindings ? rows.empty() : false;
    }
    size_t arity() const { return variables.size(); }

    bool operator==(const ResultSet&) const = default;
};

struct MalformedResponse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the SPARQL 1.1 results JSON format (bindings or boolean).
/// Throws MalformedResponse on structural problems.
ResultSet parse_results_json(const std::string& text);

/// Serializes back to the standard results JSON (stable key order).
std::string results_to_json(const ResultSet& rs, int indent = -1);

ResultSet boolean_result(bool value);

/// normalize_term applied to every cell.
ResultSet normalize_result_set(const ResultSet& rs);

} // namespace sqt

#endif
