#pragma once

#include <cstdint>
#include <vector>

#include "cubt/dataset.hpp"

namespace cubt {

struct KMeansModel {
    std::vector<double> centers;  // row-major k * p
    int k = 0;
    std::vector<int> assignments;  // n entries in {1..k}
    double wcss = 0.0;             // sum over points of squared distance to own center
    int iterations = 0;
};

/// Lloyd iterations from k distinct data points sampled without
/// replacement. Stops when the assignments stabilize or after 300
/// rounds; an emptied cluster is reseeded at the point farthest from its
/// current center.
KMeansModel kmeans(const Dataset& data, int k, std::uint64_t seed);

/// Independent restarts with seeds seed..seed+restarts-1, keeping the
/// model with minimal within-cluster sum of squares (ties to the
/// smallest seed offset).
KMeansModel kmeans_multi(const Dataset& data, int k, int restarts, std::uint64_t seed);

}  // namespace cubt
