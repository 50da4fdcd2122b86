#include "cubt/backward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "cubt/errors.hpp"

namespace cubt {

std::vector<double> DissimilarityTable::values() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& [key, d] : entries) out.push_back(d);
    return out;
}

std::string DissimilarityTable::to_csv() const {
    std::ostringstream out;
    out << "leaf_i,leaf_j,d\n";
    for (const auto& [key, d] : entries)
        out << key.first << ',' << key.second << ',' << format_double(d) << '\n';
    return out.str();
}

namespace {

// Mean of the m smallest minimum distances from `from` into `to`,
// m = max(1, floor(delta * |from|)).
double directed_trimmed_mean(const Dataset& data, const std::vector<int>& from,
                             const std::vector<int>& to, double delta) {
    std::vector<double> mins;
    mins.reserve(from.size());
    for (int i : from) {
        double best = std::numeric_limits<double>::infinity();
        for (int j : to) {
            const double d = row_distance_sq(data, static_cast<std::size_t>(i), data,
                                             static_cast<std::size_t>(j));
            if (d < best) best = d;
        }
        mins.push_back(std::sqrt(best));
    }
    const std::size_t m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(delta * static_cast<double>(from.size()))));
    std::partial_sort(mins.begin(), mins.begin() + static_cast<long>(m), mins.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += mins[i];
    return sum / static_cast<double>(m);
}

}  // namespace

double leaf_dissimilarity(const Dataset& data, const std::vector<int>& left,
                          const std::vector<int>& right, double delta) {
    if (left.empty() || right.empty()) throw EmptyNode("dissimilarity of an empty support");
    if (!(delta > 0.0) || delta > 1.0) throw InvalidParam("delta must lie in (0, 1]");
    std::set<int> seen(left.begin(), left.end());
    for (int j : right)
        if (seen.count(j)) throw OverlapError("supports share row " + std::to_string(j));
    return std::max(directed_trimmed_mean(data, left, right, delta),
                    directed_trimmed_mean(data, right, left, delta));
}

DissimilarityTable leaf_dissimilarity_table(const Dataset& data, const ClusterTree& tree,
                                            double delta) {
    DissimilarityTable table;
    const std::vector<int> leaves = tree.leaf_ids();
    for (std::size_t a = 0; a < leaves.size(); ++a)
        for (std::size_t b = a + 1; b < leaves.size(); ++b)
            table.entries[{leaves[a], leaves[b]}] = leaf_dissimilarity(
                data, tree.node(leaves[a]).indices, tree.node(leaves[b]).indices, delta);
    return table;
}

ClusterTree prune(const ClusterTree& tree, const Dataset& data, const Params& params) {
    params.validate_basic();
    if (tree.stage != Stage::maximal)
        throw StageError("prune expects a maximal tree, got stage '" + stage_name(tree.stage) +
                         "'");
    ClusterTree out = tree;
    out.stage = Stage::pruned;
    if (params.mindist == 0.0) return out;  // threshold zero turns the stage off

    while (true) {
        // Sibling leaf pairs whose trimmed dissimilarity clears the
        // threshold; the deepest parent collapses first (ties to the
        // smaller id) and the scan repeats until a full pass stays quiet.
        int pick = -1;
        int pick_depth = -1;
        for (const auto& [id, node] : out.nodes) {
            if (node.is_leaf()) continue;
            const TreeNode& l = out.node(node.left);
            const TreeNode& r = out.node(node.right);
            if (!l.is_leaf() || !r.is_leaf()) continue;
            const double d = leaf_dissimilarity(data, l.indices, r.indices, params.delta);
            if (d > params.mindist) continue;
            const int depth = out.depth_of(id);
            if (depth > pick_depth) {
                pick = id;
                pick_depth = depth;
            }
        }
        if (pick == -1) break;
        TreeNode& parent = out.node(pick);
        out.nodes.erase(parent.left);
        out.nodes.erase(parent.right);
        parent.split.reset();
        parent.left = -1;
        parent.right = -1;
    }
    out.validate(data.n_rows);
    return out;
}

double eta_from_quantile(const DissimilarityTable& table, double q) {
    if (table.empty()) throw EmptyTable("quantile of an empty dissimilarity table");
    if (!(q > 0.0) || q >= 1.0) throw InvalidParam("quantile must lie in (0, 1)");
    std::vector<double> v = table.values();
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

namespace {

struct Group {
    std::vector<int> leaves;   // leaf ids, ascending; front() is the representative
    std::vector<int> indices;  // union of the leaves' rows, sorted
};

}  // namespace

ClusterTree join(const ClusterTree& tree, const Dataset& data, const Params& params,
                 std::vector<MergeRecord>* trace) {
    params.validate_for_join();
    if (tree.stage != Stage::pruned)
        throw StageError("joining expects a pruned tree, got " + stage_name(tree.stage));

    ClusterTree out = tree;
    std::map<int, Group> groups;  // keyed by representative (minimum leaf id)
    for (int id : out.leaf_ids())
        groups.emplace(id, Group{{id}, out.node(id).indices});

    const auto group_distance = [&](const Group& a, const Group& b) {
        return leaf_dissimilarity(data, a.indices, b.indices, params.delta);
    };

    // (distance, rep_i, rep_j) of the closest pair, recomputed after each
    // merge because the union's support changes the trimmed means.
    const auto closest_pair = [&]() {
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> ids{-1, -1};
        for (auto a = groups.begin(); a != groups.end(); ++a)
            for (auto b = std::next(a); b != groups.end(); ++b) {
                const double d = group_distance(a->second, b->second);
                if (d < best) {
                    best = d;
                    ids = {a->first, b->first};
                }
            }
        return std::make_pair(best, ids);
    };

    const auto merge = [&](std::pair<int, int> ids, double d) {
        Group& into = groups.at(ids.first);
        Group& from = groups.at(ids.second);
        if (trace) trace->push_back({ids.first, ids.second, d});
        into.leaves.insert(into.leaves.end(), from.leaves.begin(), from.leaves.end());
        std::sort(into.leaves.begin(), into.leaves.end());
        std::vector<int> merged;
        std::merge(into.indices.begin(), into.indices.end(), from.indices.begin(),
                   from.indices.end(), std::back_inserter(merged));
        into.indices = std::move(merged);
        groups.erase(ids.second);
    };

    if (params.k) {
        const int k = *params.k;
        if (static_cast<int>(groups.size()) < k)
            throw KTooLarge("tree has " + std::to_string(groups.size()) + " leaves but k = " +
                            std::to_string(k));
        while (static_cast<int>(groups.size()) > k) {
            const auto [d, ids] = closest_pair();
            merge(ids, d);
        }
    } else if (groups.size() > 1) {
        // The threshold comes from the distance table of the tree as it
        // stands on entry and stays fixed across merges.
        const double eta =
            eta_from_quantile(leaf_dissimilarity_table(data, out, params.delta),
                              *params.eta_quantile);
        while (groups.size() > 1) {
            const auto [d, ids] = closest_pair();
            if (!(d < eta)) break;
            merge(ids, d);
        }
    }

    out.stage = Stage::joined;
    out.cluster_map.clear();
    int label = 0;
    for (const auto& [rep, group] : groups) {
        ++label;  // representatives ascend with the map, so labels do too
        for (int leaf : group.leaves) {
            out.cluster_map[leaf] = label;
            out.node(leaf).cluster_label = label;
        }
    }
    out.validate(data.n_rows);
    return out;
}

}  // namespace cubt
