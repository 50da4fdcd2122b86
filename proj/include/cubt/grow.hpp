#pragma once

#include <optional>
#include <vector>

#include "cubt/dataset.hpp"
#include "cubt/params.hpp"
#include "cubt/tree.hpp"

namespace cubt {

/// One evaluated split: variable (1-based), midpoint threshold, and the
/// deviance reduction it would achieve on the node.
struct SplitCandidate {
    int variable = 0;
    double threshold = 0.0;
    double delta_r = 0.0;
    int left_count = 0;
    int right_count = 0;
};

/// Deviance of a node: (1/n) * sum over the node of ||x_i - mean||^2,
/// where n is the full sample size. Zero iff all points coincide.
double node_deviance(const Dataset& data, const std::vector<int>& indices);

/// Every candidate split of the node: for each variable, midpoints
/// between consecutive distinct sorted values. Mostly a diagnostics /
/// property-testing surface; best_split scans the same set.
std::vector<SplitCandidate> all_split_candidates(const Dataset& data,
                                                 const std::vector<int>& indices);

/// The candidate maximizing the deviance reduction; ties broken by
/// smallest variable, then smallest threshold. Empty when every point in
/// the node is identical. min_child_size > 1 restricts the search to
/// balanced candidates (used by the optional child-size rule).
std::optional<SplitCandidate> best_split(const Dataset& data, const std::vector<int>& indices,
                                         int min_child_size = 1);

/// Forward stage: recursive splitting until a node is smaller than
/// minsize, cannot be split, or its best reduction falls below
/// mindev * R(root).
ClusterTree grow_maximal_tree(const Dataset& data, const Params& params);

/// Grows with params.mindev, then with 0.6, 0.5, 0.4, 0.3, 0.2, 0.1,
/// 0.05, 0.01 until the tree has at least k leaves. If the sequence runs
/// out, the last tree is returned with a FallbackExhausted warning.
ClusterTree mindev_fallback(const Dataset& data, const Params& params, int k);

}  // namespace cubt
