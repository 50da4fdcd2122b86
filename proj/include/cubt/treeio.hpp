#pragma once

#include <string>

#include "cubt/tree.hpp"

namespace cubt {

/// Tree JSON: {"stage", "root", "p", "nodes":[{id,parent,split,n,deviance,
/// cluster}], "cluster_map", "warnings"}. Children are recovered from the
/// parent links; of two siblings the smaller id is the left child.
std::string tree_to_json(const ClusterTree& tree);
ClusterTree tree_from_json(const std::string& text);

ClusterTree load_tree(const std::string& path);
void save_tree(const ClusterTree& tree, const std::string& path);

/// Result JSON: k_found, assignments, merge trace, stage snapshots and
/// the final tree.
std::string result_to_json(const ClusterResult& result);

/// Graphviz rendering. Internal nodes show "name <= threshold" (4
/// significant digits, column names when the sample carries them), the
/// true branch goes left; leaves show their cluster and size.
std::string export_dot(const ClusterTree& tree, const Dataset* data = nullptr);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace cubt
