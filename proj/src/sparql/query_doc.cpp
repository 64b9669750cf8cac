#include "sqt/sparql/query_doc.hpp"

#include <algorithm>
#include <map>

#include "sqt/kg/profile.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

using sparql::Kw;
using sparql::Token;

namespace {

const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

bool is_form_kw(Kw kw) {
    return kw == Kw::Select || kw == Kw::Ask || kw == Kw::Construct ||
           kw == Kw::Describe;
}

QueryForm form_of(Kw kw) {
    switch (kw) {
        case Kw::Select: return QueryForm::Select;
        case Kw::Ask: return QueryForm::Ask;
        case Kw::Construct: return QueryForm::Construct;
        default: return QueryForm::Describe;
    }
}

// Tokens that structure a query rather than fill a triple slot.
bool is_structural_kw(Kw kw) {
    switch (kw) {
        case Kw::Select: case Kw::Ask: case Kw::Construct: case Kw::Describe:
        case Kw::Where: case Kw::Order: case Kw::By: case Kw::Limit:
        case Kw::Offset: case Kw::Distinct: case Kw::Reduced: case Kw::As:
        case Kw::From: case Kw::Named: case Kw::Group: case Kw::Having:
        case Kw::Asc: case Kw::Desc: case Kw::Optional: case Kw::Union:
        case Kw::Minus: case Kw::Not: case Kw::Exists: case Kw::In:
            return true;
        default:
            return false;
    }
}

struct TermCollector {
    std::vector<TermOccurrence> terms;
    std::map<std::string, size_t> index_by_iri;
    std::vector<size_t> type_shorthand_triples;
    size_t triple_counter = 0;

    void record(const Iri& iri, size_t triple, TripleSlot slot) {
        auto [it, inserted] = index_by_iri.emplace(iri.value, terms.size());
        if (inserted) terms.push_back({iri, TermRole::Unknown, {}});
        auto& positions = terms[it->second].positions;
        TermPosition pos{triple, slot};
        if (std::find(positions.begin(), positions.end(), pos) == positions.end())
            positions.push_back(pos);
    }
};

// Walks the token stream tracking triple slots inside graph patterns.
// FILTER/BIND expressions, VALUES blocks, datasets clauses and anything else
// outside a basic graph pattern record IRIs uniformly in object position
// with their own triple index.
void collect_terms(const std::vector<Token>& tokens, size_t body_start,
                   const PrefixTable& resolvable, TermCollector& out) {
    struct Group {
        TripleSlot expect = TripleSlot::Subject;
        size_t cur_triple = 0;
        bool skip_until_brace = false;  // sub-SELECT header
    };
    std::vector<Group> groups;
    int expr_depth = 0;       // inside FILTER/BIND/HAVING/ORDER parens
    bool expr_pending = false;
    bool in_values = false;
    int values_brace = -1;
    int brace_depth = 0;
    bool graph_name_pending = false;

    auto resolve = [&](const Token& t) -> std::optional<Iri> {
        if (t.kind == Token::Kind::IriRef) return Iri(t.text);
        if (t.kind == Token::Kind::PName) {
            if (auto base = resolvable.lookup(t.prefix))
                return Iri(base->value + t.local);
        }
        return std::nullopt;
    };

    auto record_loose = [&](const Iri& iri) {
        out.record(iri, out.triple_counter++, TripleSlot::Object);
    };

    for (size_t i = body_start; i < tokens.size(); ++i) {
        const Token& t = tokens[i];

        if (t.kind == Token::Kind::Punct) {
            char c = t.text[0];
            if (c == '{') {
                ++brace_depth;
                if (in_values) continue;  // data block, not a BGP
                groups.push_back(Group{});
                continue;
            }
            if (c == '}') {
                --brace_depth;
                if (in_values && brace_depth < values_brace) in_values = false;
                else if (!groups.empty()) groups.pop_back();
                continue;
            }
            if (c == '(') {
                if (expr_pending || expr_depth > 0) {
                    ++expr_depth;
                    expr_pending = false;
                }
                continue;
            }
            if (c == ')') {
                if (expr_depth > 0) --expr_depth;
                continue;
            }
            if (!groups.empty() && expr_depth == 0) {
                Group& g = groups.back();
                if (c == ',') {
                    g.cur_triple = out.triple_counter++;
                    g.expect = TripleSlot::Object;
                } else if (c == ';') {
                    g.cur_triple = out.triple_counter++;
                    g.expect = TripleSlot::Predicate;
                } else if (c == '.') {
                    g.expect = TripleSlot::Subject;
                } else if (c == '/' || c == '|' || c == '^') {
                    // property path continues; '^^' datatype also lands here
                    // but the following IRI is recorded in object position
                    // only when we are not expecting a predicate.
                    if (g.expect == TripleSlot::Object) g.expect = TripleSlot::Predicate;
                }
            }
            continue;
        }

        if (t.kind == Token::Kind::Keyword) {
            if (t.kw == Kw::Filter || t.kw == Kw::Bind || t.kw == Kw::Having) {
                expr_pending = true;
                continue;
            }
            if (t.kw == Kw::Values) {
                in_values = true;
                values_brace = brace_depth + 1;
                continue;
            }
            if (t.kw == Kw::Graph || t.kw == Kw::Service) {
                graph_name_pending = true;
                continue;
            }
            if (t.kw == Kw::Exists) {
                expr_pending = false;  // EXISTS { } opens a plain group
                continue;
            }
            if (t.kw == Kw::A) {
                if (!groups.empty() && expr_depth == 0) {
                    Group& g = groups.back();
                    if (g.expect == TripleSlot::Subject)
                        g.cur_triple = out.triple_counter++;
                    out.type_shorthand_triples.push_back(g.cur_triple);
                    g.expect = TripleSlot::Object;
                }
                continue;
            }
            if (t.kw == Kw::Select && !groups.empty()) {
                groups.back().skip_until_brace = true;
                continue;
            }
            if (is_structural_kw(t.kw)) continue;
            continue;
        }

        // Element tokens: Var, IriRef, PName, String, Number, Name, LangTag.
        if (t.kind == Token::Kind::LangTag || t.kind == Token::Kind::Name)
            continue;

        auto iri = resolve(t);

        if (graph_name_pending) {
            graph_name_pending = false;
            if (iri) record_loose(*iri);
            continue;
        }
        if (expr_depth > 0 || in_values || groups.empty() ||
            groups.back().skip_until_brace) {
            if (iri) record_loose(*iri);
            continue;
        }

        Group& g = groups.back();
        switch (g.expect) {
            case TripleSlot::Subject:
                g.cur_triple = out.triple_counter++;
                if (iri) out.record(*iri, g.cur_triple, TripleSlot::Subject);
                g.expect = TripleSlot::Predicate;
                break;
            case TripleSlot::Predicate:
                if (iri) out.record(*iri, g.cur_triple, TripleSlot::Predicate);
                g.expect = TripleSlot::Object;
                break;
            case TripleSlot::Object:
                if (iri) out.record(*iri, g.cur_triple, TripleSlot::Object);
                // stays in Object: ',' allocates the next triple, ';' and '.'
                // rewind the slot, '^^' datatypes re-record in place
                break;
        }
    }
}

} // namespace

const PrefixTable& well_known_prefixes() {
    static const PrefixTable table = [] {
        PrefixTable t;
        t.set("rdf", Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#"));
        t.set("rdfs", Iri("http://www.w3.org/2000/01/rdf-schema#"));
        t.set("owl", Iri("http://www.w3.org/2002/07/owl#"));
        t.set("xsd", Iri("http://www.w3.org/2001/XMLSchema#"));
        return t;
    }();
    return table;
}

std::string to_string(QueryForm f) {
    switch (f) {
        case QueryForm::Select: return "SELECT";
        case QueryForm::Ask: return "ASK";
        case QueryForm::Construct: return "CONSTRUCT";
        default: return "DESCRIBE";
    }
}

std::string to_string(TermRole r) {
    switch (r) {
        case TermRole::Entity: return "entity";
        case TermRole::Property: return "property";
        case TermRole::Class: return "class";
        default: return "unknown";
    }
}

std::string to_string(TripleSlot s) {
    switch (s) {
        case TripleSlot::Subject: return "subject";
        case TripleSlot::Predicate: return "predicate";
        default: return "object";
    }
}

QueryDoc parse_query(const std::string& text) {
    auto lexed = sparql::lex(text);
    if (!lexed.ok()) throw LexFailure(lexed.errors.front());
    if (!sparql::brackets_balanced(lexed.tokens))
        throw LexFailure("unbalanced brackets or braces");

    QueryDoc doc;
    doc.raw_text = text;

    const auto& tokens = lexed.tokens;

    // Prologue: PREFIX declarations (BASE is tolerated and ignored).
    size_t form_idx = tokens.size();
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == Token::Kind::Keyword && is_form_kw(tokens[i].kw)) {
            form_idx = i;
            break;
        }
        if (tokens[i].kind == Token::Kind::Keyword && tokens[i].kw == Kw::Prefix &&
            i + 2 < tokens.size() && tokens[i + 1].kind == Token::Kind::PName &&
            tokens[i + 2].kind == Token::Kind::IriRef) {
            doc.prefixes.set(tokens[i + 1].prefix, Iri(tokens[i + 2].text));
        }
    }
    if (form_idx == tokens.size())
        throw LexFailure("no query form keyword (SELECT/ASK/CONSTRUCT/DESCRIBE)");
    doc.form = form_of(tokens[form_idx].kw);

    // SELECT projection: variables between SELECT and WHERE/'{'/FROM.
    if (doc.form == QueryForm::Select) {
        int paren = 0;
        bool after_as = false;
        for (size_t i = form_idx + 1; i < tokens.size(); ++i) {
            const Token& t = tokens[i];
            if (t.kind == Token::Kind::Keyword &&
                (t.kw == Kw::Where || t.kw == Kw::From))
                break;
            if (t.kind == Token::Kind::Punct) {
                if (t.text[0] == '{') break;
                if (t.text[0] == '(') ++paren;
                if (t.text[0] == ')') { --paren; after_as = false; }
                if (t.text[0] == '*' && paren == 0) doc.select_star = true;
                continue;
            }
            if (t.kind == Token::Kind::Keyword && t.kw == Kw::As) {
                after_as = true;
                continue;
            }
            if (t.kind == Token::Kind::Var) {
                if (paren == 0 || after_as) {
                    if (std::find(doc.projected_vars.begin(), doc.projected_vars.end(),
                                  t.text) == doc.projected_vars.end())
                        doc.projected_vars.push_back(t.text);
                    after_as = false;
                }
            }
        }
    }

    // Top-level ORDER BY / LIMIT (depth 0 = not inside any subgroup).
    int depth = 0;
    for (size_t i = form_idx; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind == Token::Kind::Punct) {
            if (t.text[0] == '{') ++depth;
            if (t.text[0] == '}') --depth;
            continue;
        }
        if (t.kind != Token::Kind::Keyword || depth != 0) continue;
        if (t.kw == Kw::Order && i + 1 < tokens.size() &&
            tokens[i + 1].kind == Token::Kind::Keyword && tokens[i + 1].kw == Kw::By)
            doc.order_sensitive = true;
        if (t.kw == Kw::Limit) doc.has_limit = true;
        if (t.kw == Kw::Filter) doc.has_filter_clause = true;
    }
    // FILTER at any depth counts for has_filter.
    for (const auto& t : tokens)
        if (t.kind == Token::Kind::Keyword && t.kw == Kw::Filter)
            doc.has_filter_clause = true;

    // Terms: prefixed names resolve against declared plus well-known prefixes;
    // anything unresolvable here surfaces during expand_prefixes instead.
    PrefixTable resolvable = doc.prefixes;
    resolvable.merge_defaults(well_known_prefixes());
    TermCollector collector;
    collect_terms(tokens, form_idx, resolvable, collector);
    doc.terms = std::move(collector.terms);
    doc.type_shorthand_triples = std::move(collector.type_shorthand_triples);

    return doc;
}

QueryDoc expand_prefixes(const QueryDoc& doc, const PrefixTable& defaults) {
    const std::string& src = doc.raw_text;
    auto lexed = sparql::lex(src);

    PrefixTable table = doc.prefixes;
    table.merge_defaults(defaults);

    // Mark PREFIX declaration token triples for removal.
    std::vector<bool> removed(lexed.tokens.size(), false);
    for (size_t i = 0; i + 2 < lexed.tokens.size(); ++i) {
        if (lexed.tokens[i].kind == Token::Kind::Keyword &&
            lexed.tokens[i].kw == Kw::Prefix &&
            lexed.tokens[i + 1].kind == Token::Kind::PName &&
            lexed.tokens[i + 2].kind == Token::Kind::IriRef) {
            removed[i] = removed[i + 1] = removed[i + 2] = true;
        }
    }

    std::string out;
    out.reserve(src.size());
    size_t cursor = 0;
    bool prev_removed = false;
    for (size_t i = 0; i < lexed.tokens.size(); ++i) {
        const Token& t = lexed.tokens[i];
        std::string gap = src.substr(cursor, t.begin - cursor);
        if (removed[i]) {
            cursor = t.end;
            prev_removed = true;
            continue;
        }
        if (!(prev_removed && gap.find_first_not_of(" \t\r\n") == std::string::npos))
            out += gap;
        prev_removed = false;
        if (t.kind == Token::Kind::PName) {
            auto base = table.lookup(t.prefix);
            if (!base) throw UnknownPrefix(t.prefix);
            out += "<" + base->value + t.local + ">";
        } else {
            out += src.substr(t.begin, t.end - t.begin);
        }
        cursor = t.end;
    }

    return parse_query(trim(out));
}

std::vector<TermOccurrence> extract_terms(const QueryDoc& doc,
                                          const KgProfile& profile) {
    auto in_any = [](const Iri& iri, const std::vector<Iri>& namespaces) {
        for (const auto& ns : namespaces)
            if (starts_with(iri.value, ns.value)) return true;
        return false;
    };

    // Triples carrying a type assertion: the `a` shorthand or an explicit
    // occurrence of the profile's type property in predicate position.
    std::vector<size_t> type_triples = doc.type_shorthand_triples;
    for (const auto& term : doc.terms) {
        if (term.iri.value != profile.type_property.value &&
            term.iri.value != kRdfType)
            continue;
        for (const auto& pos : term.positions)
            if (pos.slot == TripleSlot::Predicate)
                type_triples.push_back(pos.triple_index);
    }

    auto is_type_object = [&](const TermOccurrence& t) {
        for (const auto& pos : t.positions) {
            if (pos.slot != TripleSlot::Object) continue;
            if (std::find(type_triples.begin(), type_triples.end(),
                          pos.triple_index) != type_triples.end())
                return true;
        }
        return false;
    };

    std::vector<TermOccurrence> out = doc.terms;
    for (auto& term : out) {
        bool ent = in_any(term.iri, profile.entity_namespaces);
        bool prop = in_any(term.iri, profile.property_namespaces);
        bool cls = in_any(term.iri, profile.class_namespaces);
        bool any_predicate = false, all_predicate = true;
        for (const auto& pos : term.positions) {
            if (pos.slot == TripleSlot::Predicate) any_predicate = true;
            else all_predicate = false;
        }

        if (term.iri.value == profile.type_property.value) {
            term.role = TermRole::Property;
        } else if (ent && !prop && !cls) {
            term.role = TermRole::Entity;
        } else if (prop && !ent && !cls) {
            term.role = TermRole::Property;
        } else if (cls && !ent && !prop) {
            term.role = TermRole::Class;
        } else if (prop && cls && !ent) {
            // e.g. dbo: covers both the ontology's properties and classes
            if (any_predicate) term.role = TermRole::Property;
            else if (is_type_object(term)) term.role = TermRole::Class;
            else term.role = TermRole::Unknown;
        } else if (ent) {
            // entity namespace shared with classes (wd: items)
            term.role = is_type_object(term) ? TermRole::Class : TermRole::Entity;
        } else {
            // unknown namespace: the slot decides where it can
            if (is_type_object(term)) term.role = TermRole::Class;
            else if (all_predicate && any_predicate) term.role = TermRole::Property;
            else term.role = TermRole::Unknown;
        }
    }
    return out;
}

std::vector<SyntaxFinding> validate_syntax(const std::string& text) {
    std::vector<SyntaxFinding> findings;
    auto lexed = sparql::lex(text);
    for (const auto& err : lexed.errors)
        findings.push_back({"lex_error", err});
    if (!sparql::brackets_balanced(lexed.tokens))
        findings.push_back({"unbalanced_group", "brackets or braces do not balance"});

    size_t form_idx = lexed.tokens.size();
    for (size_t i = 0; i < lexed.tokens.size(); ++i) {
        if (lexed.tokens[i].kind == Token::Kind::Keyword &&
            is_form_kw(lexed.tokens[i].kw)) {
            form_idx = i;
            break;
        }
    }
    if (form_idx == lexed.tokens.size()) {
        findings.push_back({"no_query_form",
                            "no SELECT/ASK/CONSTRUCT/DESCRIBE keyword found"});
        return findings;
    }

    Kw form = lexed.tokens[form_idx].kw;
    if (form == Kw::Select || form == Kw::Ask) {
        bool has_group = false;
        for (size_t i = form_idx; i < lexed.tokens.size(); ++i) {
            if (lexed.tokens[i].kind == Token::Kind::Punct &&
                lexed.tokens[i].text[0] == '{') {
                has_group = true;
                break;
            }
        }
        if (!has_group)
            findings.push_back({"missing_group",
                                "query form requires a group graph pattern"});
    }
    return findings;
}

bool has_type_assertion(const QueryDoc& doc, const Iri& type_property) {
    if (type_property.value == kRdfType && !doc.type_shorthand_triples.empty())
        return true;
    for (const auto& term : doc.terms) {
        if (term.iri.value != type_property.value) continue;
        for (const auto& pos : term.positions)
            if (pos.slot == TripleSlot::Predicate) return true;
    }
    return false;
}

bool has_filter(const QueryDoc& doc) { return doc.has_filter_clause; }

} // namespace sqt
