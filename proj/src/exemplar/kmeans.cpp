#include "sqt/exemplar/kmeans.hpp"

#include <limits>
#include <random>

namespace sqt {

namespace {

size_t nearest_centroid(const Eigen::VectorXd& point, const Eigen::MatrixXd& centroids,
                        size_t k) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < k; ++c) {
        double d = (point - centroids.row(c).transpose()).squaredNorm();
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace

ClusterModel cluster_kmeans(const std::vector<Eigen::VectorXd>& vectors, size_t k,
                            uint64_t seed) {
    const size_t n = vectors.size();
    if (k < 1) throw PoolTooSmall("k must be at least 1");
    if (n < k)
        throw PoolTooSmall("pool of " + std::to_string(n) + " points cannot form " +
                           std::to_string(k) + " clusters");
    const auto dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim)
            throw PoolTooSmall("vectors disagree in dimensionality");
        if (!v.allFinite())
            throw PoolTooSmall("non-finite vector in pool");
    }

    ClusterModel model;
    model.k = k;
    model.seed = seed;
    model.centroids.resize(k, dim);

    // farthest-point initialization from a seeded start
    std::mt19937_64 rng(seed);
    std::vector<size_t> chosen;
    chosen.push_back(rng() % n);
    model.centroids.row(0) = vectors[chosen[0]].transpose();
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    for (size_t c = 1; c < k; ++c) {
        for (size_t i = 0; i < n; ++i) {
            double d = (vectors[i] - vectors[chosen.back()]).squaredNorm();
            if (d < min_dist[i]) min_dist[i] = d;
        }
        size_t far = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
            if (min_dist[i] > far_d) {
                far_d = min_dist[i];
                far = i;
            }
        }
        chosen.push_back(far);
        model.centroids.row(c) = vectors[far].transpose();
    }

    model.assignments.assign(n, 0);
    std::vector<size_t> prev(n, SIZE_MAX);

    for (int iter = 0; iter < 100; ++iter) {
        for (size_t i = 0; i < n; ++i)
            model.assignments[i] = nearest_centroid(vectors[i], model.centroids, k);

        // repair empty clusters: steal the point farthest from its centroid,
        // never emptying another cluster in the process
        std::vector<size_t> sizes(k, 0);
        for (size_t a : model.assignments) ++sizes[a];
        for (size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            size_t steal = SIZE_MAX;
            double steal_d = -1.0;
            for (size_t i = 0; i < n; ++i) {
                if (sizes[model.assignments[i]] <= 1) continue;
                double d = (vectors[i] -
                            model.centroids.row(model.assignments[i]).transpose())
                               .squaredNorm();
                if (d > steal_d) {
                    steal_d = d;
                    steal = i;
                }
            }
            if (steal == SIZE_MAX) continue;
            --sizes[model.assignments[steal]];
            model.assignments[steal] = c;
            ++sizes[c];
            // snap the centroid to the stolen point; keeps the distortion
            // sequence non-increasing through repairs
            model.centroids.row(c) = vectors[steal].transpose();
        }

        for (size_t c = 0; c < k; ++c) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
            size_t count = 0;
            for (size_t i = 0; i < n; ++i) {
                if (model.assignments[i] == c) {
                    sum += vectors[i];
                    ++count;
                }
            }
            if (count > 0) model.centroids.row(c) = (sum / double(count)).transpose();
        }

        model.distortion_history.push_back(distortion(vectors, model));
        if (model.assignments == prev) break;
        prev = model.assignments;
    }
    return model;
}

double distortion(const std::vector<Eigen::VectorXd>& vectors,
                  const ClusterModel& model) {
    double total = 0.0;
    for (size_t i = 0; i < vectors.size(); ++i)
        total += (vectors[i] - model.centroids.row(model.assignments[i]).transpose())
                     .squaredNorm();
    return total;
}

} // namespace sqt
