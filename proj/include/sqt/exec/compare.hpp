#ifndef SQT_EXEC_COMPARE_HPP
#define SQT_EXEC_COMPARE_HPP

#include <optional>
#include <vector>

#include "sqt/exec/result_set.hpp"
#include "sqt/sparql/query_doc.hpp"

namespace sqt {

/// Outcome of an exact-match comparison between a gold and a candidate
/// result set.
struct ComparisonOutcome {
    enum class Mode { Ordered, Unordered, Boolean };

    bool equal = false;
    Mode mode = Mode::Unordered;
    size_t missing_rows = 0;  // gold rows with no candidate match
    size_t extra_rows = 0;    // candidate rows with no gold match
    bool arity_mismatch = false;
    // when equal: candidate column index serving each gold column
    std::optional<std::vector<size_t>> permutation_used;
};

std::string to_string(ComparisonOutcome::Mode m);

struct CompareOptions {
    /// Duplicate rows are significant by default (DISTINCT usage differs
    /// across KGs); set semantics collapses them on both sides first.
    bool set_semantics = false;
};

/// Exact-match rule: booleans compare by value; bindings compare as row
/// multisets (or sequences when order_sensitive) under the best column
/// correspondence. Variable names are ignored for arity <= 5, where every
/// column permutation is tried; wider results match columns by name first
/// and then by value profile. Blank nodes are compared by a per-row
/// canonical relabeling, so labels never matter. Terms are normalized
/// before comparison.
ComparisonOutcome compare_results(const ResultSet& gold, const ResultSet& candidate,
                                  bool order_sensitive,
                                  const CompareOptions& options = {});

/// Serializes one row of a result set to a comparison key in the given
/// column order; bnode labels are canonicalized per row. Shared between the
/// comparator and its tests.
std::string row_key(const std::map<std::string, RdfTerm>& row,
                    const std::vector<std::string>& variables);

/// A gold query's top-level ORDER BY makes its comparison order-sensitive.
inline bool is_order_sensitive(const QueryDoc& gold_doc) {
    return gold_doc.order_sensitive;
}

} // namespace sqt

#endif
