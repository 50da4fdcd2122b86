#pragma once

#include <cstdint>
#include <vector>

#include "cubt/tree.hpp"

namespace cubt {

/// Rows are true groups, columns predicted clusters. Built over the
/// distinct values actually present, in ascending order.
struct ConfusionMatrix {
    std::vector<std::int64_t> counts;  // row-major rows * cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> row_values;  // original true labels per row
    std::vector<int> col_values;  // original predicted labels per column

    std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
    std::int64_t total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& true_labels,
                                 const std::vector<int>& pred_labels);

/// Maximum total agreement over all bijections between (zero-padded)
/// rows and columns. The exhaustive path enumerates every permutation;
/// the Hungarian path solves the same assignment in O(s^3). They agree
/// exactly on every instance.
std::int64_t max_agreement_exhaustive(const ConfusionMatrix& m);
std::int64_t max_agreement_hungarian(const ConfusionMatrix& m);

/// Misclassification error minimized over cluster relabelings:
/// 1 - max_agreement / n. Exhaustive search up to 8 classes, Hungarian
/// beyond.
double mce(const std::vector<int>& true_labels, const std::vector<int>& pred_labels);

/// How many results recovered exactly true_k clusters.
int recovered_k_tally(const std::vector<ClusterResult>& results, int true_k);

}  // namespace cubt
