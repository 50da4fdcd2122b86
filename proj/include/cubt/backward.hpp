#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cubt/dataset.hpp"
#include "cubt/params.hpp"
#include "cubt/tree.hpp"

namespace cubt {

/// Pairwise trimmed support-distance values between leaves, keyed by the
/// unordered id pair (smaller id first).
struct DissimilarityTable {
    std::map<std::pair<int, int>, double> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    std::vector<double> values() const;
    std::string to_csv() const;  // leaf_i,leaf_j,d
};

/// d^delta between two disjoint index sets: for each side, the mean of
/// the smallest floor(delta * n_side) (at least one) point-to-other-set
/// minimum distances; the result is the max of the two directed means.
double leaf_dissimilarity(const Dataset& data, const std::vector<int>& left,
                          const std::vector<int>& right, double delta);

/// Table over all current leaf pairs of a tree.
DissimilarityTable leaf_dissimilarity_table(const Dataset& data, const ClusterTree& tree,
                                            double delta);

/// Backward stage 1: repeatedly collapses sibling leaf pairs whose
/// dissimilarity is <= params.mindist, deepest node first (ties to the
/// smaller id), until none remain. mindist == 0 skips pruning.
ClusterTree prune(const ClusterTree& tree, const Dataset& data, const Params& params);

/// Backward stage 2: agglomerates arbitrary leaf pairs starting from the
/// minimum d^delta. With k set, merges until k groups remain; otherwise
/// merges while the minimum stays below eta, the eta_quantile-quantile of
/// the pruned tree's table. Merged leaves keep their tree position and
/// share a cluster label.
ClusterTree join(const ClusterTree& tree, const Dataset& data, const Params& params,
                 std::vector<MergeRecord>* trace = nullptr);

/// Empirical q-quantile (linear interpolation between order statistics)
/// of the table values.
double eta_from_quantile(const DissimilarityTable& table, double q);

}  // namespace cubt
