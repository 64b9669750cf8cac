#ifndef SQT_EXEMPLAR_KMEANS_HPP
#define SQT_EXEMPLAR_KMEANS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sqt/exemplar/eigen_compat.hpp"

namespace sqt {

struct PoolTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClusterModel {
    size_t k = 0;
    Eigen::MatrixXd centroids;        // k x dim
    std::vector<size_t> assignments;  // point -> cluster index, all < k
    uint64_t seed = 0;
    std::vector<double> distortion_history;  // within-cluster sum of squares
                                             // after each Lloyd iteration
};

/// Lloyd's iterations to an assignment fixpoint (max 100), deterministic for
/// a fixed seed: the first centroid is drawn from the seeded generator, the
/// rest by farthest-point initialization (ties to the lowest index). Empty
/// clusters are repaired by stealing the point farthest from its centroid.
ClusterModel cluster_kmeans(const std::vector<Eigen::VectorXd>& vectors, size_t k,
                            uint64_t seed);

double distortion(const std::vector<Eigen::VectorXd>& vectors,
                  const ClusterModel& model);

} // namespace sqt

#endif
