#pragma once

#include "cubt/dataset.hpp"
#include "cubt/params.hpp"
#include "cubt/tree.hpp"

namespace cubt {

/// Full three-stage pipeline: grow (through the mindev fallback when k is
/// given), prune, join. Snapshots keep the tree after each stage.
ClusterResult fit(const Dataset& data, const Params& params);

/// Routes every row of data through a joined tree and reads the cluster
/// label. Throws DimensionError if the column count differs from the
/// training sample, StageError if the tree was never joined.
std::vector<int> predict_labels(const ClusterTree& tree, const Dataset& data);

}  // namespace cubt
