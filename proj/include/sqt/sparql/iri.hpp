#ifndef SQT_SPARQL_IRI_HPP
#define SQT_SPARQL_IRI_HPP

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace sqt {

/// An absolute IRI. For this corpus every identifier is an http(s) IRI with
/// no whitespace; value round-trips through serialization unchanged.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v) : value(std::move(v)) {}

    bool valid() const {
        if (value.find_first_of(" \t\r\n") != std::string::npos) return false;
        return value.rfind("http://", 0) == 0 || value.rfind("https://", 0) == 0;
    }

    auto operator<=>(const Iri&) const = default;
};

/// Prefix label -> base IRI. Labels are unique by construction of the map.
class PrefixTable {
public:
    void set(const std::string& label, const Iri& base) { entries_[label] = base; }

    std::optional<Iri> lookup(const std::string& label) const {
        auto it = entries_.find(label);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& label) const { return entries_.count(label) > 0; }
    size_t size() const { return entries_.size(); }
    const std::map<std::string, Iri>& entries() const { return entries_; }

    /// Entries of `other` that are absent here are added; existing labels win.
    void merge_defaults(const PrefixTable& other) {
        for (const auto& [label, base] : other.entries_)
            entries_.emplace(label, base);
    }

    bool operator==(const PrefixTable&) const = default;

private:
    std::map<std::string, Iri> entries_;
};

/// rdf, rdfs, owl and xsd are implicitly known everywhere; KG-specific
/// prefixes come from the active profile.
const PrefixTable& well_known_prefixes();

} // namespace sqt

#endif
