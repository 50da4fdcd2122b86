#include "cubt/tree.hpp"

#include <algorithm>

#include "cubt/errors.hpp"

namespace cubt {

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::maximal: return "maximal";
        case Stage::pruned: return "pruned";
        case Stage::joined: return "joined";
    }
    return "maximal";
}

Stage stage_from_name(const std::string& name) {
    if (name == "maximal") return Stage::maximal;
    if (name == "pruned") return Stage::pruned;
    if (name == "joined") return Stage::joined;
    throw ParseError("unknown stage '" + name + "'");
}

std::vector<int> ClusterTree::leaf_ids() const {
    std::vector<int> out;
    for (const auto& [id, node] : nodes)
        if (node.is_leaf()) out.push_back(id);
    return out;  // map order is ascending already
}

int ClusterTree::depth_of(int id) const {
    int d = 0;
    for (int cur = id; nodes.at(cur).parent != -1; cur = nodes.at(cur).parent) ++d;
    return d;
}

int ClusterTree::route(const double* row) const {
    int cur = root_id;
    while (true) {
        const TreeNode& node = nodes.at(cur);
        if (node.is_leaf()) return cur;
        cur = node.split->goes_left(row) ? node.left : node.right;
    }
}

void ClusterTree::validate(std::size_t n_rows) const {
    if (nodes.empty()) throw StageError("tree has no nodes");
    if (!nodes.count(root_id)) throw StageError("root id missing from the node map");
    if (nodes.at(root_id).parent != -1) throw StageError("root must have parent -1");

    std::vector<int> covered;
    for (const auto& [id, node] : nodes) {
        if (node.id != id) throw StageError("node id disagrees with its map key");
        if (node.split.has_value() != (node.left != -1 && node.right != -1))
            throw StageError("split and child links disagree on node " + std::to_string(id));
        if (!node.is_leaf()) {
            if (!nodes.count(node.left) || !nodes.count(node.right))
                throw StageError("dangling child link on node " + std::to_string(id));
            if (nodes.at(node.left).parent != id || nodes.at(node.right).parent != id)
                throw StageError("child does not point back to node " + std::to_string(id));
            if (node.left >= node.right)
                throw StageError("left child must carry the smaller id");
            const int v = node.split->variable;
            if (v < 1 || static_cast<std::size_t>(v) > n_vars)
                throw StageError("split variable out of range on node " + std::to_string(id));
            if (!node.indices.empty() &&
                node.count != nodes.at(node.left).count + nodes.at(node.right).count)
                throw StageError("child sizes do not add up under node " + std::to_string(id));
        } else if (!node.indices.empty()) {
            covered.insert(covered.end(), node.indices.begin(), node.indices.end());
        }
        if (node.id != root_id && !nodes.count(node.parent))
            throw StageError("dangling parent link on node " + std::to_string(id));
    }

    // Index sets are only present on freshly fitted trees; when they are,
    // the leaves must partition the training rows exactly.
    if (!covered.empty()) {
        std::sort(covered.begin(), covered.end());
        if (covered.size() != n_rows)
            throw StageError("leaf index sets do not cover the sample");
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (covered[i] != static_cast<int>(i))
                throw StageError("leaf index sets overlap or leave gaps");
    }
}

}  // namespace cubt
