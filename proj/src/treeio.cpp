#include "cubt/treeio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cubt/errors.hpp"

namespace cubt {

namespace {

using nlohmann::json;

json tree_json(const ClusterTree& tree) {
    json nodes = json::array();
    for (const auto& [id, node] : tree.nodes) {
        json j;
        j["id"] = id;
        j["parent"] = node.parent;
        if (node.split)
            j["split"] = {{"var", node.split->variable}, {"threshold", node.split->threshold}};
        else
            j["split"] = nullptr;
        j["n"] = node.count;
        j["deviance"] = node.deviance;
        if (node.cluster_label > 0)
            j["cluster"] = node.cluster_label;
        else
            j["cluster"] = nullptr;
        nodes.push_back(std::move(j));
    }
    json map = json::object();
    for (const auto& [leaf, label] : tree.cluster_map) map[std::to_string(leaf)] = label;
    return json{{"stage", stage_name(tree.stage)},
                {"root", tree.root_id},
                {"p", tree.n_vars},
                {"nodes", std::move(nodes)},
                {"cluster_map", std::move(map)},
                {"warnings", tree.warnings}};
}

ClusterTree tree_from(const json& j) {
    ClusterTree tree;
    tree.stage = stage_from_name(j.at("stage").get<std::string>());
    tree.root_id = j.at("root").get<int>();
    tree.n_vars = j.at("p").get<std::size_t>();
    if (j.contains("warnings")) tree.warnings = j.at("warnings").get<std::vector<std::string>>();

    std::map<int, std::vector<int>> children;  // parent -> child ids, ascending
    for (const auto& nj : j.at("nodes")) {
        TreeNode node;
        node.id = nj.at("id").get<int>();
        node.parent = nj.at("parent").get<int>();
        node.count = nj.at("n").get<int>();
        node.deviance = nj.at("deviance").get<double>();
        if (!nj.at("split").is_null())
            node.split = SplitRule{nj.at("split").at("var").get<int>(),
                                   nj.at("split").at("threshold").get<double>()};
        if (!nj.at("cluster").is_null()) node.cluster_label = nj.at("cluster").get<int>();
        if (node.parent != -1) children[node.parent].push_back(node.id);
        tree.nodes.emplace(node.id, std::move(node));
    }
    for (auto& [parent, kids] : children) {
        if (kids.size() != 2)
            throw ParseError("node " + std::to_string(parent) + " has " +
                             std::to_string(kids.size()) + " children, expected 2");
        if (!tree.nodes.count(parent)) throw ParseError("child of a missing node");
        std::sort(kids.begin(), kids.end());
        tree.nodes.at(parent).left = kids[0];  // smaller id is the left child
        tree.nodes.at(parent).right = kids[1];
    }
    for (const auto& [leaf, label] : j.at("cluster_map").items())
        tree.cluster_map[std::stoi(leaf)] = label.get<int>();
    tree.validate(0);
    return tree;
}

}  // namespace

std::string tree_to_json(const ClusterTree& tree) { return tree_json(tree).dump(2) + "\n"; }

ClusterTree tree_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad tree JSON: ") + e.what());
    }
    try {
        return tree_from(j);
    } catch (const json::exception& e) {
        throw ParseError(std::string("tree JSON misses a field: ") + e.what());
    }
}

ClusterTree load_tree(const std::string& path) { return tree_from_json(read_text_file(path)); }

void save_tree(const ClusterTree& tree, const std::string& path) {
    write_text_file(path, tree_to_json(tree));
}

std::string result_to_json(const ClusterResult& result) {
    json trace = json::array();
    for (const auto& rec : result.dissimilarity_trace)
        trace.push_back(
            {{"leaf_i", rec.leaf_i}, {"leaf_j", rec.leaf_j}, {"d", rec.dissimilarity}});
    json snapshots = json::array();
    for (const auto& snap : result.snapshots) snapshots.push_back(tree_json(snap));
    const json j{{"k_found", result.k_found},
                 {"assignments", result.assignments},
                 {"trace", std::move(trace)},
                 {"snapshots", std::move(snapshots)},
                 {"tree", tree_json(result.tree)}};
    return j.dump(2) + "\n";
}

std::string export_dot(const ClusterTree& tree, const Dataset* data) {
    const auto var_name = [&](int var) -> std::string {
        const std::size_t j = static_cast<std::size_t>(var - 1);
        if (data && data->column_names.size() == tree.n_vars) return data->column_names[j];
        return "X(" + std::to_string(var) + ")";
    };
    std::ostringstream out;
    out << "digraph tree {\n  node [shape=box];\n";
    for (const auto& [id, node] : tree.nodes) {
        out << "  n" << id << " [label=\"";
        if (node.split) {
            char thr[32];
            std::snprintf(thr, sizeof thr, "%.4g", node.split->threshold);
            out << var_name(node.split->variable) << " <= " << thr;
        } else {
            if (node.cluster_label > 0) out << "cluster " << node.cluster_label << "\\n";
            out << "n=" << node.count;
        }
        out << "\"];\n";
    }
    for (const auto& [id, node] : tree.nodes) {
        if (node.is_leaf()) continue;
        out << "  n" << id << " -> n" << node.left << " [label=\"yes\"];\n";
        out << "  n" << id << " -> n" << node.right << " [label=\"no\"];\n";
    }
    out << "}\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cubt
