#include "sqt/exemplar/select.hpp"

#include <limits>
#include <stdexcept>

namespace sqt {

std::vector<Exemplar> exemplars_from_manifest(const DatasetManifest& manifest,
                                              const TranslationDirection& direction) {
    std::vector<Exemplar> out;
    for (const auto& item : manifest.items) {
        auto kg1 = item.query_by_kg.find(direction.source.name);
        auto kg2 = item.query_by_kg.find(direction.target.name);
        if (kg1 == item.query_by_kg.end() || kg2 == item.query_by_kg.end()) continue;
        Exemplar e;
        e.id = item.id;
        e.nlq = item.nlq;
        e.query_kg1 = kg1->second;
        e.query_kg2 = kg2->second;
        auto er2 = item.er2_by_direction.find(direction.label());
        if (er2 != item.er2_by_direction.end()) {
            e.er2 = er2->second;
        } else {
            e.er2.source_kg = direction.source.name;
            e.er2.target_kg = direction.target.name;
        }
        out.push_back(std::move(e));
    }
    return out;
}

SelectionResult select_exemplars(const std::vector<Exemplar>& pool,
                                 const std::vector<EmbeddingVector>& vectors,
                                 const std::set<std::string>& test_ids,
                                 const SelectOptions& options) {
    if (pool.size() != vectors.size())
        throw DimensionMismatch("pool and vector list sizes differ");

    std::vector<const Exemplar*> kept;
    std::vector<Eigen::VectorXd> points;
    for (size_t i = 0; i < pool.size(); ++i) {
        if (test_ids.count(pool[i].id)) continue;  // leakage exclusion
        kept.push_back(&pool[i]);
        Eigen::VectorXd v = vectors[i].values;
        if (options.cosine) {
            double norm = v.norm();
            if (norm > 0) v /= norm;
        }
        points.push_back(std::move(v));
    }
    if (kept.size() < options.k)
        throw PoolTooSmall("pool holds " + std::to_string(kept.size()) +
                           " usable exemplars, need " + std::to_string(options.k));

    SelectionResult result;
    result.model = cluster_kmeans(points, options.k, options.seed);

    for (size_t c = 0; c < options.k; ++c) {
        size_t best = SIZE_MAX;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < kept.size(); ++i) {
            if (result.model.assignments[i] != c) continue;
            double d =
                (points[i] - result.model.centroids.row(c).transpose()).squaredNorm();
            if (d < best_d ||
                (d == best_d && best != SIZE_MAX && kept[i]->id < kept[best]->id)) {
                best_d = d;
                best = i;
            }
        }
        if (best == SIZE_MAX)
            throw std::logic_error("cluster " + std::to_string(c) + " is empty");
        result.exemplars.push_back(*kept[best]);
    }

    for (const auto& e : result.exemplars) {
        if (test_ids.count(e.id))
            throw std::logic_error("leakage: selected exemplar " + e.id +
                                   " is a test item");
    }
    return result;
}

} // namespace sqt
