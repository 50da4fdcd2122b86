#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cubt/errors.hpp"
#include "cubt/eval.hpp"
#include "cubt/pipeline.hpp"
#include "cubt/rng.hpp"
#include "cubt/treeio.hpp"

using cubt::Dataset;
using cubt::Params;

namespace {

Dataset blobs(const std::vector<std::vector<double>>& centers, int per_center, double sd,
              std::uint64_t seed) {
    cubt::Rng rng(seed);
    Dataset d;
    d.n_cols = centers[0].size();
    d.n_rows = centers.size() * static_cast<std::size_t>(per_center);
    for (std::size_t g = 0; g < centers.size(); ++g)
        for (int i = 0; i < per_center; ++i) {
            for (double c : centers[g]) d.values.push_back(rng.normal(c, sd));
            d.labels.push_back(static_cast<int>(g) + 1);
        }
    return d;
}

Params three_group_params() {
    Params p;
    p.minsize = 5;
    p.mindev = 0.001;
    p.k = 3;
    return p;
}

}  // namespace

TEST_CASE("separated groups come back with zero error") {
    Dataset d = blobs({{0, 0}, {10, 0}, {0, 10}}, 40, 0.5, 1);
    auto result = cubt::fit(d, three_group_params());
    CHECK(result.k_found == 3);
    CHECK(cubt::mce(d.labels, result.assignments) == doctest::Approx(0.0));
    CHECK(result.tree.stage == cubt::Stage::joined);
    REQUIRE(result.snapshots.size() == 3);
    CHECK(result.snapshots[0].stage == cubt::Stage::maximal);
    CHECK(result.snapshots[1].stage == cubt::Stage::pruned);
    CHECK(result.snapshots[2].stage == cubt::Stage::joined);
}

TEST_CASE("fitting twice gives bitwise identical output") {
    Dataset d = blobs({{0, 0}, {6, 6}}, 30, 1.0, 2);
    Params p = three_group_params();
    p.k = 2;
    auto a = cubt::fit(d, p);
    auto b = cubt::fit(d, p);
    CHECK(a.assignments == b.assignments);
    CHECK(cubt::tree_to_json(a.tree) == cubt::tree_to_json(b.tree));
    CHECK(cubt::result_to_json(a) == cubt::result_to_json(b));
}

TEST_CASE("predicting on the training rows reproduces the fit") {
    Dataset d = blobs({{0, 0}, {8, 0}, {0, 8}}, 25, 0.8, 3);
    auto result = cubt::fit(d, three_group_params());
    CHECK(cubt::predict_labels(result.tree, d) == result.assignments);
}

TEST_CASE("a point on a split boundary routes to the left child") {
    Dataset train;
    train.n_cols = 1;
    train.n_rows = 4;
    train.values = {0.0, 1.0, 10.0, 11.0};
    Params p;
    p.mindev = 0.01;
    p.minsize = 2;
    p.k = 2;
    auto result = cubt::fit(train, p);
    REQUIRE(result.tree.root().split.has_value());
    const double thr = result.tree.root().split->threshold;

    Dataset probe;
    probe.n_cols = 1;
    probe.n_rows = 3;
    probe.values = {thr, std::nextafter(thr, 1e9), -100.0};
    auto labels = cubt::predict_labels(result.tree, probe);
    CHECK(labels[0] == labels[2]);  // exactly-at-threshold goes with the left side
    CHECK(labels[1] != labels[0]);
}

TEST_CASE("prediction validates dimensions and stage") {
    Dataset d = blobs({{0, 0}, {9, 9}}, 20, 0.5, 4);
    Params p = three_group_params();
    p.k = 2;
    auto result = cubt::fit(d, p);

    Dataset wrong;
    wrong.n_cols = 3;
    wrong.n_rows = 1;
    wrong.values = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(cubt::predict_labels(result.tree, wrong), cubt::DimensionError);
    CHECK_THROWS_AS(cubt::predict_labels(result.snapshots[0], d), cubt::StageError);
}

TEST_CASE("tree JSON round-trips and the loaded tree still routes") {
    Dataset d = blobs({{0, 0}, {7, 0}, {0, 7}}, 20, 0.6, 5);
    auto result = cubt::fit(d, three_group_params());
    const std::string text = cubt::tree_to_json(result.tree);
    auto loaded = cubt::tree_from_json(text);

    CHECK(loaded.stage == cubt::Stage::joined);
    CHECK(loaded.n_vars == result.tree.n_vars);
    CHECK(loaded.root_id == result.tree.root_id);
    CHECK(loaded.cluster_map == result.tree.cluster_map);
    CHECK(loaded.nodes.size() == result.tree.nodes.size());
    for (const auto& [id, node] : result.tree.nodes) {
        const auto& other = loaded.node(id);
        CHECK(other.parent == node.parent);
        CHECK(other.count == node.count);
        CHECK(other.left == node.left);
        CHECK(other.right == node.right);
        CHECK(other.split.has_value() == node.split.has_value());
        if (node.split) {
            CHECK(other.split->variable == node.split->variable);
            CHECK(other.split->threshold == node.split->threshold);
        }
    }
    loaded.validate(0);  // structural checks only; indices are not serialized
    CHECK(cubt::predict_labels(loaded, d) == result.assignments);
    CHECK(cubt::tree_to_json(loaded) == text);
}

TEST_CASE("result JSON names the fields consumers rely on") {
    Dataset d = blobs({{0, 0}, {5, 5}}, 15, 0.5, 6);
    Params p = three_group_params();
    p.k = 2;
    auto result = cubt::fit(d, p);
    const std::string text = cubt::result_to_json(result);
    for (const char* key : {"\"k_found\"", "\"assignments\"", "\"trace\"", "\"snapshots\"",
                            "\"tree\"", "\"stage\""})
        CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("single-leaf graph renders without edges") {
    Dataset d;
    d.n_cols = 1;
    d.n_rows = 3;
    d.values = {1.0, 1.0, 1.0};
    Params p;
    p.mindev = 0.5;
    p.k = 1;
    auto result = cubt::fit(d, p);
    const std::string dot = cubt::export_dot(result.tree);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("cluster 1") != std::string::npos);
    CHECK(dot.find("->") == std::string::npos);
}

TEST_CASE("graph labels use generic names or column names as available") {
    Dataset d = blobs({{0.0}, {10.0}}, 10, 0.3, 7);
    Params p;
    p.mindev = 0.01;
    p.minsize = 10;
    p.k = 2;
    auto result = cubt::fit(d, p);

    const std::string plain = cubt::export_dot(result.tree);
    CHECK(plain.find("X(1) <= ") != std::string::npos);
    CHECK(plain.find("[label=\"yes\"]") < plain.find("[label=\"no\"]"));

    Dataset named = d;
    named.column_names = {"height"};
    const std::string with_names = cubt::export_dot(result.tree, &named);
    CHECK(with_names.find("height <= ") != std::string::npos);
    CHECK(with_names.find("X(1)") == std::string::npos);
}

TEST_CASE("thresholds render with four significant digits") {
    Dataset d;
    d.n_cols = 1;
    d.n_rows = 4;
    d.values = {0.111118, 0.111118, 9.0, 9.0};
    Params p;
    p.mindev = 0.01;
    p.k = 2;
    auto result = cubt::fit(d, p);
    const std::string dot = cubt::export_dot(result.tree);
    CHECK(dot.find("4.556") != std::string::npos);  // midpoint 4.555559 rounded
}

TEST_CASE("standardization changes the fitted scale but not the recovery") {
    // second coordinate carries the separation at a much larger scale
    Dataset d = blobs({{0, 0}, {0, 500}}, 30, 1.0, 8);
    for (std::size_t i = 0; i < d.n_rows; ++i) d.values[2 * i] *= 0.001;
    Params p;
    p.minsize = 5;
    p.mindev = 0.001;
    p.k = 2;
    p.standardize = true;
    auto result = cubt::fit(d, p);
    CHECK(cubt::mce(d.labels, result.assignments) == doctest::Approx(0.0));
}

TEST_CASE("files round-trip through save and load") {
    Dataset d = blobs({{0, 0}, {4, 4}}, 12, 0.4, 9);
    Params p = three_group_params();
    p.k = 2;
    auto result = cubt::fit(d, p);
    const std::string path = "/tmp/cubt_test_tree.json";
    cubt::save_tree(result.tree, path);
    auto loaded = cubt::load_tree(path);
    CHECK(cubt::tree_to_json(loaded) == cubt::tree_to_json(result.tree));
    std::remove(path.c_str());

    CHECK_THROWS_AS(cubt::load_tree("/tmp/cubt_no_such_tree.json"), cubt::IoError);
}
