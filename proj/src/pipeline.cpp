#include "cubt/pipeline.hpp"

#include <algorithm>

#include "cubt/backward.hpp"
#include "cubt/errors.hpp"
#include "cubt/grow.hpp"

namespace cubt {

ClusterResult fit(const Dataset& data, const Params& params) {
    params.validate_for_join();
    data.validate();
    const Dataset* sample = &data;
    Dataset scaled;
    if (params.standardize) {
        scaled = standardize_dataset(data);
        sample = &scaled;
    }

    ClusterResult result;
    ClusterTree grown = params.k ? mindev_fallback(*sample, params, *params.k)
                                 : grow_maximal_tree(*sample, params);
    result.snapshots.push_back(grown);
    ClusterTree pruned = prune(grown, *sample, params);
    result.snapshots.push_back(pruned);
    result.tree = join(pruned, *sample, params, &result.dissimilarity_trace);
    result.snapshots.push_back(result.tree);

    result.assignments.assign(data.n_rows, 0);
    int k_found = 0;
    for (const auto& [leaf, label] : result.tree.cluster_map) {
        k_found = std::max(k_found, label);
        for (int i : result.tree.node(leaf).indices)
            result.assignments[static_cast<std::size_t>(i)] = label;
    }
    result.k_found = k_found;
    return result;
}

std::vector<int> predict_labels(const ClusterTree& tree, const Dataset& data) {
    if (tree.stage != Stage::joined)
        throw StageError("prediction needs a joined tree, got " + stage_name(tree.stage));
    if (data.n_cols != tree.n_vars)
        throw DimensionError("sample has " + std::to_string(data.n_cols) +
                             " columns, tree expects " + std::to_string(tree.n_vars));
    std::vector<int> out(data.n_rows, 0);
    for (std::size_t i = 0; i < data.n_rows; ++i)
        out[i] = tree.cluster_map.at(tree.route(data.row(i)));
    return out;
}

}  // namespace cubt
