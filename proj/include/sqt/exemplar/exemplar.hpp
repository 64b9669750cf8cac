#ifndef SQT_EXEMPLAR_EXEMPLAR_HPP
#define SQT_EXEMPLAR_EXEMPLAR_HPP

#include <string>
#include <vector>

#include "sqt/align/er2.hpp"
#include "sqt/bench/manifest.hpp"
#include "sqt/kg/profile.hpp"

namespace sqt {

/// One few-shot translation example: an NLQ with its gold query on both
/// sides of the direction and the er2 mapping that goes with it.
struct Exemplar {
    std::string id;
    std::string nlq;
    std::string query_kg1;
    std::string query_kg2;
    Er2Doc er2;

    bool operator==(const Exemplar&) const = default;
};

/// Projects manifest items onto exemplars for one direction. Items missing
/// a query on either side are skipped; a missing er2 yields an empty one.
std::vector<Exemplar> exemplars_from_manifest(const DatasetManifest& manifest,
                                              const TranslationDirection& direction);

} // namespace sqt

#endif
