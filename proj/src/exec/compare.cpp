#include "sqt/exec/compare.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace sqt {

namespace {

// One cell serialized unambiguously; bnodes get their per-row canonical id.
void append_term(std::string& out, const RdfTerm* term,
                 std::map<std::string, size_t>& bnode_ids) {
    if (term == nullptr) {
        out += "~unbound";
        return;
    }
    switch (term->kind) {
        case RdfTerm::Kind::Iri:
            out += "I:" + term->value;
            break;
        case RdfTerm::Kind::Bnode: {
            auto [it, inserted] = bnode_ids.emplace(term->value, bnode_ids.size());
            out += "B:" + std::to_string(it->second);
            break;
        }
        case RdfTerm::Kind::Literal:
            out += "L:" + term->value;
            if (term->datatype) out += "^^" + *term->datatype;
            if (term->lang) out += "@" + *term->lang;
            break;
    }
}

std::vector<std::string> row_keys_in_order(const ResultSet& rs,
                                           const std::vector<size_t>& column_order) {
    std::vector<std::string> keys;
    keys.reserve(rs.rows.size());
    for (const auto& row : rs.rows) {
        std::string key;
        std::map<std::string, size_t> bnode_ids;
        for (size_t col : column_order) {
            const std::string& var = rs.variables[col];
            auto it = row.find(var);
            append_term(key, it == row.end() ? nullptr : &it->second, bnode_ids);
            key += '\x1f';
        }
        keys.push_back(std::move(key));
    }
    return keys;
}

size_t multiset_overlap(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    return common.size();
}

size_t sequence_matches(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
    size_t n = std::min(a.size(), b.size());
    size_t matched = 0;
    for (size_t i = 0; i < n; ++i)
        if (a[i] == b[i]) ++matched;
    return matched;
}

// Column order for wide results: name matches first, remaining columns by
// sorted value profile, leftovers positional.
std::vector<size_t> match_columns_wide(const ResultSet& gold, const ResultSet& cand) {
    size_t n = gold.arity();
    std::vector<size_t> mapping(n, SIZE_MAX);
    std::vector<bool> used(n, false);

    for (size_t g = 0; g < n; ++g) {
        for (size_t c = 0; c < n; ++c) {
            if (!used[c] && cand.variables[c] == gold.variables[g]) {
                mapping[g] = c;
                used[c] = true;
                break;
            }
        }
    }

    auto column_profile = [](const ResultSet& rs, size_t col) {
        std::vector<std::string> vals;
        for (const auto& row : rs.rows) {
            std::map<std::string, size_t> bnode_ids;
            std::string key;
            auto it = row.find(rs.variables[col]);
            append_term(key, it == row.end() ? nullptr : &it->second, bnode_ids);
            vals.push_back(std::move(key));
        }
        std::sort(vals.begin(), vals.end());
        std::string joined;
        for (const auto& v : vals) joined += v + '\x1e';
        return joined;
    };

    for (size_t g = 0; g < n; ++g) {
        if (mapping[g] != SIZE_MAX) continue;
        std::string profile = column_profile(gold, g);
        for (size_t c = 0; c < n; ++c) {
            if (!used[c] && column_profile(cand, c) == profile) {
                mapping[g] = c;
                used[c] = true;
                break;
            }
        }
    }
    for (size_t g = 0; g < n; ++g) {
        if (mapping[g] != SIZE_MAX) continue;
        for (size_t c = 0; c < n; ++c) {
            if (!used[c]) {
                mapping[g] = c;
                used[c] = true;
                break;
            }
        }
    }
    return mapping;
}

} // namespace

std::string to_string(ComparisonOutcome::Mode m) {
    switch (m) {
        case ComparisonOutcome::Mode::Ordered: return "ordered";
        case ComparisonOutcome::Mode::Unordered: return "unordered";
        default: return "boolean";
    }
}

std::string row_key(const std::map<std::string, RdfTerm>& row,
                    const std::vector<std::string>& variables) {
    std::string key;
    std::map<std::string, size_t> bnode_ids;
    for (const auto& var : variables) {
        auto it = row.find(var);
        append_term(key, it == row.end() ? nullptr : &it->second, bnode_ids);
        key += '\x1f';
    }
    return key;
}

ComparisonOutcome compare_results(const ResultSet& gold_in, const ResultSet& cand_in,
                                  bool order_sensitive,
                                  const CompareOptions& options) {
    ComparisonOutcome out;

    if (gold_in.kind == ResultSet::Kind::Boolean ||
        cand_in.kind == ResultSet::Kind::Boolean) {
        out.mode = ComparisonOutcome::Mode::Boolean;
        if (gold_in.kind != cand_in.kind) {
            out.equal = false;
            out.missing_rows = gold_in.rows.size();
            out.extra_rows = cand_in.rows.size();
            return out;
        }
        out.equal = gold_in.boolean_value == cand_in.boolean_value;
        return out;
    }

    ResultSet gold = normalize_result_set(gold_in);
    ResultSet cand = normalize_result_set(cand_in);
    if (options.set_semantics) {
        auto dedupe = [](ResultSet& rs) {
            std::vector<std::map<std::string, RdfTerm>> unique;
            std::set<std::string> seen;
            for (const auto& row : rs.rows)
                if (seen.insert(row_key(row, rs.variables)).second)
                    unique.push_back(row);
            rs.rows = std::move(unique);
        };
        dedupe(gold);
        dedupe(cand);
    }
    out.mode = order_sensitive ? ComparisonOutcome::Mode::Ordered
                               : ComparisonOutcome::Mode::Unordered;

    if (gold.arity() != cand.arity()) {
        out.arity_mismatch = true;
        out.missing_rows = gold.rows.size();
        out.extra_rows = cand.rows.size();
        return out;
    }

    size_t n = gold.arity();
    std::vector<size_t> gold_order(n);
    std::iota(gold_order.begin(), gold_order.end(), 0);
    auto gold_keys = row_keys_in_order(gold, gold_order);

    auto evaluate = [&](const std::vector<size_t>& perm) {
        auto cand_keys = row_keys_in_order(cand, perm);
        return order_sensitive ? sequence_matches(gold_keys, cand_keys)
                               : multiset_overlap(gold_keys, cand_keys);
    };

    auto finish = [&](const std::vector<size_t>& best_perm, size_t best_matched) {
        bool full = best_matched == gold_keys.size() &&
                    gold_keys.size() == cand.rows.size();
        out.equal = full;
        if (full) {
            out.permutation_used = best_perm;
        } else {
            out.missing_rows = gold.rows.size() - best_matched;
            out.extra_rows = cand.rows.size() - best_matched;
        }
    };

    // Zero-column results (e.g. SELECT with no vars) compare by row counts.
    if (n == 0) {
        finish({}, std::min(gold.rows.size(), cand.rows.size()));
        return out;
    }

    if (n <= 5) {
        std::vector<size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<size_t> best_perm = perm;
        size_t best = 0;
        do {
            size_t matched = evaluate(perm);
            if (matched > best) {
                best = matched;
                best_perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        finish(best_perm, best);
        return out;
    }

    auto mapping = match_columns_wide(gold, cand);
    finish(mapping, evaluate(mapping));
    return out;
}

} // namespace sqt
