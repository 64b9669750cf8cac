#ifndef SQT_ALIGN_CACHE_HPP
#define SQT_ALIGN_CACHE_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "sqt/align/er2.hpp"

namespace sqt {

/// Append-only mapping cache keyed by (source IRI, target KG name). Entries
/// are never expired automatically; re-stores append a newer record which
/// wins on reload. Manual-file entries shadow endpoint lookups for the same
/// key. Writes are serialized; lookups return the stored value unchanged.
class MappingCache {
public:
    MappingCache() = default;  // memory-only
    explicit MappingCache(std::string path);  // loads any existing records

    std::optional<TermMapping> lookup(const Iri& source_id,
                                      const std::string& target_kg) const;

    /// Stores in memory and, when file-backed, appends one record.
    void store(const TermMapping& mapping, const std::string& target_kg);

    size_t size() const;
    const std::string& path() const { return path_; }

private:
    using Key = std::pair<std::string, std::string>;

    std::string path_;
    std::map<Key, TermMapping> endpoint_entries_;
    std::map<Key, TermMapping> manual_entries_;
    mutable std::mutex mutex_;
};

} // namespace sqt

#endif
