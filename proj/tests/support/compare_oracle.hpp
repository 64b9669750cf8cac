#ifndef SQT_TESTS_COMPARE_ORACLE_HPP
#define SQT_TESTS_COMPARE_ORACLE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sqt/exec/result_set.hpp"

namespace sqt::testing {

// Brute-force exact-match oracle, written against the comparison contract
// only: try every column permutation; rows are multisets (sequences when
// ordered); bnode labels replaced by per-row first-appearance indices;
// terms normalized. Shares nothing with compare_results beyond the data
// model and normalize_term.

inline std::vector<std::string> oracle_row(const std::map<std::string, RdfTerm>& row,
                                           const std::vector<std::string>& vars,
                                           const std::vector<size_t>& order) {
    std::vector<std::string> cells;
    std::map<std::string, int> seen_bnodes;
    for (size_t idx : order) {
        auto it = row.find(vars[idx]);
        if (it == row.end()) {
            cells.push_back("(unbound)");
            continue;
        }
        RdfTerm t = normalize_term(it->second);
        switch (t.kind) {
            case RdfTerm::Kind::Iri:
                cells.push_back("iri|" + t.value);
                break;
            case RdfTerm::Kind::Bnode: {
                auto [bit, _] = seen_bnodes.emplace(t.value, (int)seen_bnodes.size());
                cells.push_back("bnode|" + std::to_string(bit->second));
                break;
            }
            case RdfTerm::Kind::Literal: {
                std::string cell = "lit|" + t.value + "|";
                if (t.datatype) cell += *t.datatype;
                cell += "|";
                if (t.lang) cell += *t.lang;
                cells.push_back(cell);
                break;
            }
        }
    }
    return cells;
}

inline bool oracle_equal(const ResultSet& gold, const ResultSet& cand,
                         bool order_sensitive) {
    if (gold.kind == ResultSet::Kind::Boolean || cand.kind == ResultSet::Kind::Boolean) {
        return gold.kind == cand.kind && gold.boolean_value == cand.boolean_value;
    }
    if (gold.arity() != cand.arity()) return false;
    if (gold.rows.size() != cand.rows.size()) return false;

    size_t n = gold.arity();
    std::vector<size_t> identity(n);
    for (size_t i = 0; i < n; ++i) identity[i] = i;

    std::vector<std::vector<std::string>> gold_rows;
    for (const auto& row : gold.rows)
        gold_rows.push_back(oracle_row(row, gold.variables, identity));

    if (n == 0) return true;

    std::vector<size_t> perm = identity;
    std::sort(perm.begin(), perm.end());
    do {
        std::vector<std::vector<std::string>> cand_rows;
        for (const auto& row : cand.rows)
            cand_rows.push_back(oracle_row(row, cand.variables, perm));
        if (order_sensitive) {
            if (cand_rows == gold_rows) return true;
        } else {
            auto a = gold_rows;
            auto b = cand_rows;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a == b) return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace sqt::testing

#endif
