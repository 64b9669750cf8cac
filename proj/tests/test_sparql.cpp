#include <doctest.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "sqt/kg/profile.hpp"
#include "sqt/sparql/query_doc.hpp"
#include "sqt/util/strings.hpp"

using namespace sqt;

namespace {

const std::string kKubrickQuery =
    "PREFIX dbo: <http://dbpedia.org/ontology/> "
    "PREFIX res: <http://dbpedia.org/resource/> "
    "SELECT DISTINCT ?uri WHERE { ?uri dbo:director res:Stanley_Kubrick }";

// Queries shaped like the benchmark's gold set, used for property checks.
const std::vector<std::string> kGoldCorpus = {
    kKubrickQuery,
    "PREFIX wd: <http://www.wikidata.org/entity/> "
    "PREFIX wdt: <http://www.wikidata.org/prop/direct/> "
    "SELECT DISTINCT ?uri WHERE { ?uri wdt:P57 wd:Q2001 }",
    "PREFIX dbo: <http://dbpedia.org/ontology/> PREFIX dbr: <http://dbpedia.org/resource/> "
    "SELECT ?height WHERE { dbr:Mount_Everest dbo:elevation ?height }",
    "PREFIX wdt: <http://www.wikidata.org/prop/direct/> PREFIX wd: <http://www.wikidata.org/entity/> "
    "ASK { wd:Q76 wdt:P31 wd:Q5 }",
    "PREFIX dbo: <http://dbpedia.org/ontology/> PREFIX dbr: <http://dbpedia.org/resource/> "
    "SELECT ?name WHERE { ?c dbo:country dbr:Germany . ?c rdfs:label ?name . "
    "FILTER(lang(?name) = \"en\") } ORDER BY ?name LIMIT 10",
    "PREFIX wd: <http://www.wikidata.org/entity/> PREFIX wdt: <http://www.wikidata.org/prop/direct/> "
    "SELECT ?h WHERE { ?m wdt:P31 wd:Q8502 . ?m wdt:P2044 ?h } ORDER BY DESC(?h) LIMIT 1",
    "SELECT (COUNT(?child) AS ?n) WHERE { <http://dbpedia.org/resource/Albert_Einstein> "
    "<http://dbpedia.org/ontology/child> ?child }",
    "PREFIX dbo: <http://dbpedia.org/ontology/> PREFIX dbr: <http://dbpedia.org/resource/> "
    "SELECT DISTINCT ?film WHERE { ?film a dbo:Film ; dbo:director dbr:Stanley_Kubrick . }",
};

// Independent oracle: regex scan over prefix-expanded text, classifying by
// namespace string prefix only. Deliberately ignorant of the lexer.
std::map<std::string, std::string> regex_term_scan(const std::string& expanded) {
    std::map<std::string, std::string> roles;
    std::regex iri_re("<([^<>]*)>");
    for (auto it = std::sregex_iterator(expanded.begin(), expanded.end(), iri_re);
         it != std::sregex_iterator(); ++it) {
        std::string iri = (*it)[1];
        std::string role = "unknown";
        if (iri.rfind("http://www.wikidata.org/prop/", 0) == 0)
            role = "property";
        else if (iri.rfind("http://www.wikidata.org/entity/", 0) == 0)
            role = "entity";
        roles.emplace(iri, role);
    }
    return roles;
}

QueryDoc expanded_with(const std::string& text, const KgProfile& profile) {
    PrefixTable defaults = profile.prefixes;
    defaults.merge_defaults(well_known_prefixes());
    return expand_prefixes(parse_query(text), defaults);
}

} // namespace

TEST_CASE("parse_query detects form, projection and terms") {
    QueryDoc doc = parse_query(kKubrickQuery);
    CHECK(doc.form == QueryForm::Select);
    REQUIRE(doc.projected_vars.size() == 1);
    CHECK(doc.projected_vars[0] == "uri");
    CHECK(doc.terms.size() == 2);
    CHECK(doc.prefixes.size() == 2);
    CHECK_FALSE(doc.order_sensitive);
    CHECK_FALSE(doc.has_limit);
}

TEST_CASE("parse_query: ASK has no projection") {
    QueryDoc doc = parse_query("ASK { wd:Q76 wdt:P31 wd:Q5 }");
    CHECK(doc.form == QueryForm::Ask);
    CHECK(doc.projected_vars.empty());
}

TEST_CASE("parse_query: unbalanced brace is a LexFailure") {
    CHECK_THROWS_AS(parse_query("SELECT ?x WHERE { ?x"), LexFailure);
}

TEST_CASE("parse_query: no query form is a LexFailure") {
    CHECK_THROWS_AS(parse_query("this is not sparql"), LexFailure);
}

TEST_CASE("parse_query: order sensitivity only from top-level ORDER BY") {
    auto ordered = parse_query(
        "SELECT ?h WHERE { ?m <http://p> ?h } ORDER BY DESC(?h) LIMIT 1");
    CHECK(ordered.order_sensitive);
    CHECK(ordered.has_limit);

    auto plain = parse_query("SELECT ?h WHERE { ?m <http://p> ?h } LIMIT 3");
    CHECK_FALSE(plain.order_sensitive);
    CHECK(plain.has_limit);

    auto nested = parse_query(
        "SELECT ?x WHERE { { SELECT ?x WHERE { ?x <http://p> ?y } ORDER BY ?y } }");
    CHECK_FALSE(nested.order_sensitive);
}

TEST_CASE("expand_prefixes rewrites prefixed names to absolute IRIs") {
    QueryDoc doc = expand_prefixes(parse_query(kKubrickQuery));
    CHECK(doc.raw_text.find("<http://dbpedia.org/ontology/director>") != std::string::npos);
    CHECK(doc.raw_text.find("<http://dbpedia.org/resource/Stanley_Kubrick>") !=
          std::string::npos);
    CHECK(doc.raw_text.find("PREFIX") == std::string::npos);
    CHECK(doc.raw_text.find("dbo:") == std::string::npos);
}

TEST_CASE("expand_prefixes: query without prefixed names is unchanged") {
    std::string q = "SELECT ?x WHERE { ?x <http://example.org/p> \"lit\" }";
    QueryDoc doc = expand_prefixes(parse_query(q));
    CHECK(doc.raw_text == q);
}

TEST_CASE("expand_prefixes: undeclared non-default prefix") {
    std::string q = "SELECT ?n WHERE { ?p foaf:name ?n }";
    CHECK_THROWS_AS(expand_prefixes(parse_query(q)), UnknownPrefix);
}

TEST_CASE("expand_prefixes: well-known defaults cover rdf-family prefixes") {
    std::string q = "SELECT ?x WHERE { ?x rdfs:label ?l }";
    QueryDoc doc = expand_prefixes(parse_query(q));
    CHECK(doc.raw_text.find("<http://www.w3.org/2000/01/rdf-schema#label>") !=
          std::string::npos);
}

TEST_CASE("expand_prefixes is idempotent over the gold corpus") {
    PrefixTable defaults = well_known_prefixes();
    for (const auto& q : kGoldCorpus) {
        QueryDoc once = expand_prefixes(parse_query(q), defaults);
        QueryDoc twice = expand_prefixes(once, defaults);
        CHECK(once.raw_text == twice.raw_text);
    }
}

TEST_CASE("expand_prefixes handles escaped local names") {
    std::string q =
        "PREFIX dbr: <http://dbpedia.org/resource/> "
        "SELECT ?x WHERE { dbr:Nokia_X\\(2014\\) <http://example.org/p> ?x }";
    QueryDoc doc = expand_prefixes(parse_query(q));
    CHECK(doc.raw_text.find("<http://dbpedia.org/resource/Nokia_X(2014)>") !=
          std::string::npos);
}

TEST_CASE("extract_terms assigns roles from the KG namespace profile") {
    const KgProfile& dbpedia = builtin_profile("DBpedia");
    QueryDoc doc = expanded_with(kKubrickQuery, dbpedia);
    auto terms = extract_terms(doc, dbpedia);
    REQUIRE(terms.size() == 2);

    std::map<std::string, TermRole> by_iri;
    for (const auto& t : terms) by_iri[t.iri.value] = t.role;
    CHECK(by_iri.at("http://dbpedia.org/ontology/director") == TermRole::Property);
    CHECK(by_iri.at("http://dbpedia.org/resource/Stanley_Kubrick") == TermRole::Entity);
}

TEST_CASE("extract_terms: query with only variables yields nothing") {
    const KgProfile& dbpedia = builtin_profile("DBpedia");
    QueryDoc doc = parse_query("SELECT ?s WHERE { ?s ?p ?o }");
    CHECK(extract_terms(doc, dbpedia).empty());
}

TEST_CASE("extract_terms agrees with the independent regex oracle") {
    const KgProfile& wikidata = builtin_profile("Wikidata");
    QueryDoc doc = expanded_with(
        "PREFIX wd: <http://www.wikidata.org/entity/> "
        "PREFIX wdt: <http://www.wikidata.org/prop/direct/> "
        "SELECT ?f WHERE { ?f wdt:P57 wd:Q2001 }",
        wikidata);

    auto oracle = regex_term_scan(doc.raw_text);
    auto terms = extract_terms(doc, wikidata);
    REQUIRE(terms.size() == oracle.size());
    for (const auto& t : terms) {
        REQUIRE(oracle.count(t.iri.value) == 1);
        CHECK(to_string(t.role) == oracle.at(t.iri.value));
    }
    CHECK(oracle.at("http://www.wikidata.org/prop/direct/P57") == "property");
    CHECK(oracle.at("http://www.wikidata.org/entity/Q2001") == "entity");
}

TEST_CASE("term completeness: every bracketed IRI appears exactly once") {
    for (const auto& q : kGoldCorpus) {
        QueryDoc doc = expand_prefixes(parse_query(q));
        std::regex iri_re("<([^<>]*)>");
        std::set<std::string> seen;
        for (auto it = std::sregex_iterator(doc.raw_text.begin(), doc.raw_text.end(),
                                            iri_re);
             it != std::sregex_iterator(); ++it)
            seen.insert((*it)[1]);

        std::set<std::string> extracted;
        for (const auto& t : doc.terms) {
            CHECK(!t.positions.empty());
            CHECK(extracted.insert(t.iri.value).second);  // unique per IRI
        }
        CHECK(extracted == seen);
    }
}

TEST_CASE("role/slot consistency: predicate-only terms are never entities") {
    for (const auto* name : {"DBpedia", "Wikidata"}) {
        const KgProfile& profile = builtin_profile(name);
        for (const auto& q : kGoldCorpus) {
            QueryDoc doc = expanded_with(q, profile);
            for (const auto& t : extract_terms(doc, profile)) {
                bool all_predicate = std::all_of(
                    t.positions.begin(), t.positions.end(),
                    [](const TermPosition& p) { return p.slot == TripleSlot::Predicate; });
                if (all_predicate) CHECK(t.role != TermRole::Entity);
            }
        }
    }
}

TEST_CASE("property paths extract each property IRI separately") {
    const KgProfile& wikidata = builtin_profile("Wikidata");
    QueryDoc doc = expanded_with(
        "PREFIX wd: <http://www.wikidata.org/entity/> "
        "PREFIX wdt: <http://www.wikidata.org/prop/direct/> "
        "SELECT ?x WHERE { ?x wdt:P31/wdt:P279* wd:Q5 }",
        wikidata);
    auto terms = extract_terms(doc, wikidata);
    std::map<std::string, TermRole> by_iri;
    for (const auto& t : terms) by_iri[t.iri.value] = t.role;
    CHECK(by_iri.at("http://www.wikidata.org/prop/direct/P31") == TermRole::Property);
    CHECK(by_iri.at("http://www.wikidata.org/prop/direct/P279") == TermRole::Property);
    CHECK(by_iri.at("http://www.wikidata.org/entity/Q5") == TermRole::Entity);
}

TEST_CASE("class detection via rdf:type object position") {
    const KgProfile& dbpedia = builtin_profile("DBpedia");
    QueryDoc doc = expanded_with(
        "PREFIX dbo: <http://dbpedia.org/ontology/> "
        "SELECT ?f WHERE { ?f a dbo:Film . ?f dbo:director ?d }",
        dbpedia);
    auto terms = extract_terms(doc, dbpedia);
    std::map<std::string, TermRole> by_iri;
    for (const auto& t : terms) by_iri[t.iri.value] = t.role;
    CHECK(by_iri.at("http://dbpedia.org/ontology/Film") == TermRole::Class);
    CHECK(by_iri.at("http://dbpedia.org/ontology/director") == TermRole::Property);
}

TEST_CASE("validate_syntax: gold query passes, junk and unbalanced fail") {
    CHECK(validate_syntax(kKubrickQuery).empty());

    auto no_form = validate_syntax("Here is your query:");
    REQUIRE(no_form.size() == 1);
    CHECK(no_form[0].code == "no_query_form");

    auto unbalanced = validate_syntax("SELECT ?x { ?x <http://p> <http://o> ");
    REQUIRE(!unbalanced.empty());
    CHECK(unbalanced[0].code == "unbalanced_group");
}

TEST_CASE("validate_syntax: SELECT without any group") {
    auto findings = validate_syntax("SELECT ?x");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "missing_group");
}

TEST_CASE("validate_syntax passes every gold corpus query") {
    for (const auto& q : kGoldCorpus) CHECK(validate_syntax(q).empty());
}

TEST_CASE("has_type_assertion sees both the shorthand and the explicit property") {
    Iri rdf_type("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
    Iri p31("http://www.wikidata.org/prop/direct/P31");

    auto with_a = parse_query("SELECT ?f WHERE { ?f a <http://dbpedia.org/ontology/Film> }");
    CHECK(has_type_assertion(with_a, rdf_type));
    CHECK_FALSE(has_type_assertion(with_a, p31));

    auto with_p31 = expand_prefixes(
        parse_query("PREFIX wdt: <http://www.wikidata.org/prop/direct/> "
                    "PREFIX wd: <http://www.wikidata.org/entity/> "
                    "SELECT ?x WHERE { ?x wdt:P31 wd:Q5 }"));
    CHECK(has_type_assertion(with_p31, p31));
    CHECK_FALSE(has_type_assertion(with_p31, rdf_type));

    auto none = parse_query("SELECT ?x WHERE { ?x <http://example.org/p> ?y }");
    CHECK_FALSE(has_type_assertion(none, rdf_type));
}
