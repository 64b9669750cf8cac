#ifndef SQT_KG_PROFILE_HPP
#define SQT_KG_PROFILE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/sparql/iri.hpp"

namespace sqt {

enum class IdentifierStyle { HumanReadable, Numeric };

std::string to_string(IdentifierStyle s);
IdentifierStyle identifier_style_from(const std::string& s);

/// Declarative description of one knowledge graph. Everything that the
/// extraction, alignment, classification and execution stages need to know
/// about a KG lives here; adding a KG pair means adding profiles plus
/// mapping data, no code.
struct KgProfile {
    std::string name;
    std::string endpoint_url;
    std::vector<Iri> entity_namespaces;
    std::vector<Iri> property_namespaces;
    std::vector<Iri> class_namespaces;
    Iri type_property;
    IdentifierStyle identifier_style = IdentifierStyle::HumanReadable;
    PrefixTable prefixes;  // implicit prefix labels for this KG's namespaces

    /// Endpoint after applying the SPARQL_ENDPOINT_<NAME> override.
    std::string effective_endpoint() const;

    /// True when the IRI lies in any of the three namespace lists.
    bool owns(const Iri& iri) const;

    bool operator==(const KgProfile&) const = default;
};

struct TranslationDirection {
    KgProfile source;
    KgProfile target;

    std::string label() const { return source.name + "->" + target.name; }
};

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& msg)
        : std::runtime_error(msg + " (" + f + ")"), field(std::move(f)) {}
};

/// The four profiles the harness ships with.
std::vector<KgProfile> builtin_profiles();
const KgProfile& builtin_profile(const std::string& name);

/// Loads profiles from a JSON file ({"profiles": [...]} or a bare array).
/// Throws ConfigError naming the offending field path.
std::vector<KgProfile> load_profiles(const std::string& path);

/// Serialization used by save/load round-trips.
std::string profiles_to_json(const std::vector<KgProfile>& profiles);
std::vector<KgProfile> profiles_from_json(const std::string& text);

} // namespace sqt

#endif
