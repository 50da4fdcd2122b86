#include "cubt/grow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cubt/errors.hpp"

namespace cubt {

double node_deviance(const Dataset& data, const std::vector<int>& indices) {
    if (indices.empty()) throw EmptyNode("deviance of an empty node");
    const std::size_t p = data.n_cols;
    std::vector<double> mean(p, 0.0);
    for (int i : indices) {
        const double* row = data.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(indices.size());
    double sum = 0.0;
    for (int i : indices) {
        const double* row = data.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - mean[j];
            sum += d * d;
        }
    }
    return sum / static_cast<double>(data.n_rows);
}

namespace {

// Enumerates every (variable, midpoint) candidate of the node and hands
// each one to visit. The reduction uses the two-child mean identity
//   delta = (n_l * n_r) / (n * n_t) * ||mean_l - mean_r||^2
// so one p-column prefix-sum sweep per variable covers all thresholds.
void for_each_candidate(const Dataset& data, const std::vector<int>& indices,
                        const std::function<void(const SplitCandidate&)>& visit) {
    const std::size_t nt = indices.size();
    if (nt < 2) return;
    const std::size_t p = data.n_cols;
    const double n = static_cast<double>(data.n_rows);

    std::vector<int> order(indices);
    std::vector<double> prefix(p);   // column sums of the current left part
    std::vector<double> total(p, 0.0);
    for (int i : indices) {
        const double* row = data.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < p; ++j) total[j] += row[j];
    }

    for (std::size_t var = 0; var < p; ++var) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return data.at(static_cast<std::size_t>(a), var) <
                   data.at(static_cast<std::size_t>(b), var);
        });
        std::fill(prefix.begin(), prefix.end(), 0.0);
        for (std::size_t pos = 0; pos + 1 < nt; ++pos) {
            const double* row = data.row(static_cast<std::size_t>(order[pos]));
            for (std::size_t j = 0; j < p; ++j) prefix[j] += row[j];
            const double v = data.at(static_cast<std::size_t>(order[pos]), var);
            const double next = data.at(static_cast<std::size_t>(order[pos + 1]), var);
            if (v == next) continue;  // not a boundary between distinct values
            const double nl = static_cast<double>(pos + 1);
            const double nr = static_cast<double>(nt - pos - 1);
            double gap = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double d = prefix[j] / nl - (total[j] - prefix[j]) / nr;
                gap += d * d;
            }
            SplitCandidate c;
            c.variable = static_cast<int>(var) + 1;
            c.threshold = v + (next - v) / 2.0;
            c.delta_r = nl * nr / (n * static_cast<double>(nt)) * gap;
            c.left_count = static_cast<int>(nl);
            c.right_count = static_cast<int>(nr);
            visit(c);
        }
    }
}

}  // namespace

std::vector<SplitCandidate> all_split_candidates(const Dataset& data,
                                                 const std::vector<int>& indices) {
    if (indices.empty()) throw EmptyNode("no candidates in an empty node");
    std::vector<SplitCandidate> out;
    for_each_candidate(data, indices, [&](const SplitCandidate& c) { out.push_back(c); });
    return out;
}

std::optional<SplitCandidate> best_split(const Dataset& data, const std::vector<int>& indices,
                                         int min_child_size) {
    if (indices.empty()) throw EmptyNode("best split of an empty node");
    if (indices.size() < 2) throw SingletonNode("cannot split a single-point node");
    std::optional<SplitCandidate> best;
    for_each_candidate(data, indices, [&](const SplitCandidate& c) {
        if (c.left_count < min_child_size || c.right_count < min_child_size) return;
        if (!best) {
            best = c;
            return;
        }
        // Two cuts that induce the same partition compute the same reduction
        // through different prefix sums, so "equal" must absorb rounding noise
        // before the smallest-variable, smallest-threshold rule applies.
        const double tol = 1e-12 * std::max(c.delta_r, best->delta_r);
        const double diff = c.delta_r - best->delta_r;
        if (diff > tol ||
            (diff >= -tol && (c.variable < best->variable ||
                              (c.variable == best->variable && c.threshold < best->threshold))))
            best = c;
    });
    return best;
}

ClusterTree grow_maximal_tree(const Dataset& data, const Params& params) {
    params.validate_basic();
    data.validate();

    ClusterTree tree;
    tree.stage = Stage::maximal;
    tree.n_vars = data.n_cols;
    tree.root_id = 1;

    std::vector<int> root_idx(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i) root_idx[i] = static_cast<int>(i);
    const double floor_gain = params.mindev * node_deviance(data, root_idx);

    int next_id = 1;
    // Children are created left before right, so ids are in preorder and
    // the left sibling always carries the smaller id.
    std::function<int(std::vector<int>&&, int)> build = [&](std::vector<int>&& idx,
                                                            int parent) -> int {
        const int id = next_id++;
        TreeNode node;
        node.id = id;
        node.parent = parent;
        node.deviance = node_deviance(data, idx);
        node.count = static_cast<int>(idx.size());
        node.indices = std::move(idx);
        tree.nodes.emplace(id, std::move(node));

        TreeNode& self = tree.node(id);
        if (self.count < params.minsize || self.count < 2) return id;
        const auto cand =
            best_split(data, self.indices, params.enforce_child_minsize ? params.minsize : 1);
        if (!cand) return id;
        if (cand->delta_r < floor_gain) return id;

        std::vector<int> left_idx, right_idx;
        left_idx.reserve(static_cast<std::size_t>(cand->left_count));
        right_idx.reserve(static_cast<std::size_t>(cand->right_count));
        const SplitRule rule{cand->variable, cand->threshold};
        for (int i : self.indices)
            (rule.goes_left(data.row(static_cast<std::size_t>(i))) ? left_idx : right_idx)
                .push_back(i);

        const int left_id = build(std::move(left_idx), id);
        const int right_id = build(std::move(right_idx), id);
        self.split = rule;  // map references stay valid across the inserts
        self.left = left_id;
        self.right = right_id;
        return id;
    };
    build(std::move(root_idx), -1);
    tree.validate(data.n_rows);
    return tree;
}

ClusterTree mindev_fallback(const Dataset& data, const Params& params, int k) {
    if (k < 1) throw KOutOfRange("k must be at least 1");
    static const double ladder[] = {0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.01};

    Params attempt = params;
    ClusterTree tree = grow_maximal_tree(data, attempt);
    if (tree.leaf_count() >= k) return tree;
    for (double dev : ladder) {
        if (dev >= params.mindev) continue;
        attempt.mindev = dev;
        tree = grow_maximal_tree(data, attempt);
        if (tree.leaf_count() >= k) return tree;
    }
    tree.warnings.push_back("FallbackExhausted");
    return tree;
}

}  // namespace cubt
