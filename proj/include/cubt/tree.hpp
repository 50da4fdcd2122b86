#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubt/dataset.hpp"
#include "cubt/params.hpp"

namespace cubt {

/// Axis-aligned binary rule: value(variable) <= threshold routes left.
/// `variable` is 1-based to match label numbering in every emitted format.
struct SplitRule {
    int variable = 0;
    double threshold = 0.0;

    bool goes_left(const double* row) const { return row[variable - 1] <= threshold; }
};

struct TreeNode {
    int id = 0;
    int parent = -1;                 // -1 for the root
    std::vector<int> indices;        // sorted row indices of the sample in this node
    int count = 0;                   // == indices.size() while fitting; survives (de)serialization
    double deviance = 0.0;           // (1/n) * sum of squared distances to the node mean
    std::optional<SplitRule> split;  // set iff both children are set
    int left = -1;
    int right = -1;
    int cluster_label = 0;           // 0 until the joining stage labels the leaves

    bool is_leaf() const { return !split.has_value(); }
    int size() const { return count; }
};

enum class Stage { maximal, pruned, joined };

std::string stage_name(Stage s);
Stage stage_from_name(const std::string& name);

/// Binary partition tree over a fixed sample. Node ids are assigned in
/// creation (pre-order) order, so a node's left child always has the
/// smaller id of the two children.
struct ClusterTree {
    std::map<int, TreeNode> nodes;  // keyed by id; ordered for deterministic output
    int root_id = 1;
    Stage stage = Stage::maximal;
    std::size_t n_vars = 0;              // p of the training sample
    std::map<int, int> cluster_map;      // leaf id -> cluster label, filled by join
    std::vector<std::string> warnings;   // e.g. FallbackExhausted

    const TreeNode& node(int id) const { return nodes.at(id); }
    TreeNode& node(int id) { return nodes.at(id); }
    const TreeNode& root() const { return nodes.at(root_id); }

    /// Leaf ids in ascending order.
    std::vector<int> leaf_ids() const;
    int leaf_count() const { return static_cast<int>(leaf_ids().size()); }
    int depth_of(int id) const;

    /// Routes one observation (length n_vars) to a leaf id.
    int route(const double* row) const;

    /// Checks tree-shape invariants; throws on violation. The leaf index
    /// sets must partition {0..n-1} of the training sample.
    void validate(std::size_t n_rows) const;
};

struct MergeRecord {
    int leaf_i = 0;
    int leaf_j = 0;
    double dissimilarity = 0.0;
};

/// Everything a fit produces: the final tree, per-stage snapshots, the
/// assignment vector and the merge trace.
struct ClusterResult {
    std::vector<int> assignments;  // n entries, values in {1..k_found}
    ClusterTree tree;              // stage == joined
    std::vector<ClusterTree> snapshots;  // maximal, pruned, joined
    int k_found = 0;
    std::vector<MergeRecord> dissimilarity_trace;
};

}  // namespace cubt
