#ifndef SQT_EXEMPLAR_SELECT_HPP
#define SQT_EXEMPLAR_SELECT_HPP

#include <set>
#include <string>
#include <vector>

#include "sqt/exemplar/embedding.hpp"
#include "sqt/exemplar/exemplar.hpp"
#include "sqt/exemplar/kmeans.hpp"

namespace sqt {

struct SelectOptions {
    size_t k = 4;
    uint64_t seed = 0;
    /// Euclidean on raw vectors by default; cosine is Euclidean on
    /// pre-normalized vectors.
    bool cosine = false;
};

struct SelectionResult {
    std::vector<Exemplar> exemplars;  // one per cluster, ordered by cluster index
    ClusterModel model;
};

/// Picks k diverse exemplars: items whose id is in test_ids are dropped
/// first (leakage rule), the remainder is clustered, and each cluster
/// contributes its member nearest the centroid (ties to the lowest id).
/// Deterministic for fixed inputs and seed. Throws PoolTooSmall when fewer
/// than k items survive the exclusion, and asserts leakage freedom on the
/// way out.
SelectionResult select_exemplars(const std::vector<Exemplar>& pool,
                                 const std::vector<EmbeddingVector>& vectors,
                                 const std::set<std::string>& test_ids,
                                 const SelectOptions& options = {});

} // namespace sqt

#endif
