#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cubt/backward.hpp"
#include "cubt/errors.hpp"
#include "cubt/grow.hpp"
#include "cubt/pipeline.hpp"
#include "cubt/rng.hpp"

using cubt::Dataset;
using cubt::Params;

namespace {

Dataset make(std::initializer_list<double> values, std::size_t cols) {
    Dataset d;
    d.values = values;
    d.n_cols = cols;
    d.n_rows = d.values.size() / cols;
    return d;
}

// Two tight 1-d blobs far apart; deep growth gives several leaves per blob.
Dataset two_blobs(int per_blob, double gap, std::uint64_t seed) {
    cubt::Rng rng(seed);
    Dataset d;
    d.n_cols = 1;
    d.n_rows = static_cast<std::size_t>(2 * per_blob);
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < per_blob; ++i)
            d.values.push_back(rng.normal(b * gap, 0.5));
    return d;
}

}  // namespace

TEST_CASE("dissimilarity of two singletons is their distance") {
    Dataset d = make({0, 0, 3, 0}, 2);
    for (double delta : {0.05, 0.2, 0.5, 1.0}) {
        CHECK(cubt::leaf_dissimilarity(d, {0}, {1}, delta) == doctest::Approx(3.0));
    }
}

TEST_CASE("directed means differ and the larger side wins") {
    // left {0}, right {1, 2}: left mean 1, right mean (1+2)/2
    Dataset d = make({0, 1, 2}, 1);
    CHECK(cubt::leaf_dissimilarity(d, {0}, {1, 2}, 1.0) == doctest::Approx(1.5));
    CHECK(cubt::leaf_dissimilarity(d, {1, 2}, {0}, 1.0) == doctest::Approx(1.5));
}

TEST_CASE("interleaved sets with close nearest neighbors read as close") {
    // Each set holds the other's nearest neighbor at distance 0.1.
    Dataset d = make({0.0, 0.1, 1.0, 1.1}, 1);
    CHECK(cubt::leaf_dissimilarity(d, {0, 2}, {1, 3}, 0.4) <= 0.1 + 1e-12);
}

TEST_CASE("dissimilarity rejects bad inputs") {
    Dataset d = make({0, 1, 2}, 1);
    CHECK_THROWS_AS(cubt::leaf_dissimilarity(d, {}, {1}, 0.2), cubt::EmptyNode);
    CHECK_THROWS_AS(cubt::leaf_dissimilarity(d, {0, 1}, {1, 2}, 0.2), cubt::OverlapError);
    CHECK_THROWS_AS(cubt::leaf_dissimilarity(d, {0}, {1}, 0.0), cubt::InvalidParam);
    CHECK_THROWS_AS(cubt::leaf_dissimilarity(d, {0}, {1}, 1.5), cubt::InvalidParam);
}

TEST_CASE("dissimilarity is symmetric and monotone in the trimming fraction") {
    cubt::Rng rng(17);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t nl = 1 + rng.bounded(12);
        const std::size_t nr = 1 + rng.bounded(12);
        Dataset d;
        d.n_cols = 2;
        d.n_rows = nl + nr;
        for (std::size_t i = 0; i < 2 * d.n_rows; ++i)
            d.values.push_back(rng.normal(0.0, 3.0));
        std::vector<int> left, right;
        for (std::size_t i = 0; i < nl; ++i) left.push_back(static_cast<int>(i));
        for (std::size_t i = nl; i < nl + nr; ++i) right.push_back(static_cast<int>(i));

        double prev = 0.0;
        for (double delta : {0.1, 0.3, 0.6, 1.0}) {
            const double dv = cubt::leaf_dissimilarity(d, left, right, delta);
            CHECK(dv == cubt::leaf_dissimilarity(d, right, left, delta));
            CHECK(dv >= prev - 1e-12);
            prev = dv;
        }
    }
}

TEST_CASE("table covers every leaf pair of a grown tree") {
    Dataset d = two_blobs(20, 30.0, 3);
    Params p;
    p.minsize = 5;
    p.mindev = 0.001;
    auto tree = cubt::grow_maximal_tree(d, p);
    const auto leaves = tree.leaf_ids();
    REQUIRE(leaves.size() >= 2);

    auto table = cubt::leaf_dissimilarity_table(d, tree, 0.2);
    CHECK(table.size() == leaves.size() * (leaves.size() - 1) / 2);
    for (const auto& [pair, value] : table.entries) {
        CHECK(pair.first < pair.second);
        CHECK(value >= 0.0);
    }
    const std::string csv = table.to_csv();
    CHECK(csv.substr(0, 16) == "leaf_i,leaf_j,d\n");
}

TEST_CASE("quantile threshold interpolates order statistics") {
    cubt::DissimilarityTable t;
    t.entries[{1, 2}] = 1.0;
    t.entries[{1, 3}] = 2.0;
    t.entries[{2, 3}] = 3.0;
    t.entries[{2, 4}] = 4.0;
    CHECK(cubt::eta_from_quantile(t, 0.25) == doctest::Approx(1.75));
    CHECK(cubt::eta_from_quantile(t, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("quantile of a constant table is that constant") {
    cubt::DissimilarityTable t;
    t.entries[{1, 2}] = 7.5;
    t.entries[{1, 3}] = 7.5;
    for (double q : {0.01, 0.4, 0.99}) CHECK(cubt::eta_from_quantile(t, q) == 7.5);
}

TEST_CASE("quantile rejects empty tables and out-of-range fractions") {
    cubt::DissimilarityTable t;
    CHECK_THROWS_AS(cubt::eta_from_quantile(t, 0.5), cubt::EmptyTable);
    t.entries[{1, 2}] = 1.0;
    CHECK_THROWS_AS(cubt::eta_from_quantile(t, 0.0), cubt::InvalidParam);
    CHECK_THROWS_AS(cubt::eta_from_quantile(t, 1.0), cubt::InvalidParam);
}

TEST_CASE("pruning requires an unpruned tree") {
    Dataset d = two_blobs(10, 20.0, 4);
    Params p;
    p.mindev = 0.001;
    auto tree = cubt::grow_maximal_tree(d, p);
    auto pruned = cubt::prune(tree, d, p);
    CHECK(pruned.stage == cubt::Stage::pruned);
    CHECK_THROWS_AS(cubt::prune(pruned, d, p), cubt::StageError);
}

TEST_CASE("threshold zero skips pruning but advances the stage") {
    Dataset d = two_blobs(10, 20.0, 5);
    Params p;
    p.mindev = 0.001;
    p.mindist = 0.0;
    auto tree = cubt::grow_maximal_tree(d, p);
    auto pruned = cubt::prune(tree, d, p);
    CHECK(pruned.stage == cubt::Stage::pruned);
    CHECK(pruned.nodes.size() == tree.nodes.size());
}

TEST_CASE("sibling leaves of one tight blob collapse") {
    // A single blob grown one level deep: the two halves are close, so a
    // generous threshold must merge them back into the root.
    cubt::Rng rng(6);
    Dataset d;
    d.n_cols = 1;
    d.n_rows = 30;
    for (int i = 0; i < 30; ++i) d.values.push_back(rng.normal(0.0, 1.0));
    Params p;
    p.mindev = 1e-9;
    p.minsize = 15;
    auto tree = cubt::grow_maximal_tree(d, p);
    REQUIRE(tree.leaf_count() >= 2);

    p.mindist = 100.0;
    auto pruned = cubt::prune(tree, d, p);
    CHECK(pruned.leaf_count() == 1);
    CHECK(pruned.nodes.size() == 1);
    CHECK(!pruned.root().split.has_value());
}

TEST_CASE("pruning cascades through chains of collapsible siblings") {
    // Nested 1-d groups: two points near 0, one at 1, one at 30. Deep growth
    // peels singles off; a threshold of 5 folds everything on the left back
    // together while keeping the far point separate.
    Dataset d = make({0.0, 0.2, 1.0, 30.0}, 1);
    Params p;
    p.mindev = 1e-12;
    auto tree = cubt::grow_maximal_tree(d, p);
    REQUIRE(tree.leaf_count() == 4);

    p.mindist = 5.0;
    auto pruned = cubt::prune(tree, d, p);
    CHECK(pruned.leaf_count() == 2);

    // fixed point: rerunning from scratch on the already-collapsed shape
    // finds nothing else to do
    for (const auto& [id, node] : pruned.nodes) {
        if (node.is_leaf()) continue;
        const auto& l = pruned.node(node.left);
        const auto& r = pruned.node(node.right);
        if (l.is_leaf() && r.is_leaf())
            CHECK(cubt::leaf_dissimilarity(d, l.indices, r.indices, p.delta) > p.mindist);
    }
}

TEST_CASE("joining requires a pruned tree and enough leaves") {
    Dataset d = two_blobs(10, 20.0, 8);
    Params p;
    p.mindev = 0.001;
    p.k = 2;
    auto tree = cubt::grow_maximal_tree(d, p);
    CHECK_THROWS_AS(cubt::join(tree, d, p), cubt::StageError);

    auto pruned = cubt::prune(tree, d, p);
    Params too_many = p;
    too_many.k = static_cast<int>(pruned.leaf_count()) + 1;
    CHECK_THROWS_AS(cubt::join(pruned, d, too_many), cubt::KTooLarge);
}

TEST_CASE("join merges the closest pair first") {
    // Three 1-d groups at 0, 0.1 and 10; with two clusters requested the
    // near pair must fuse and the far group stays alone.
    Dataset d = make({0.0, 0.0, 0.1, 0.1, 10.0, 10.0}, 1);
    Params p;
    p.mindev = 1e-12;
    p.minsize = 2;
    p.k = 2;
    auto pruned = cubt::prune(cubt::grow_maximal_tree(d, p), d, p);
    REQUIRE(pruned.leaf_count() == 3);

    std::vector<cubt::MergeRecord> trace;
    auto joined = cubt::join(pruned, d, p, &trace);
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].dissimilarity == doctest::Approx(0.1));

    const auto assign = cubt::predict_labels(joined, d);
    CHECK(assign[0] == assign[2]);
    CHECK(assign[0] != assign[4]);
}

TEST_CASE("join with k equal to the leaf count changes nothing") {
    Dataset d = two_blobs(10, 20.0, 9);
    Params p;
    p.mindev = 0.001;
    auto pruned = cubt::prune(cubt::grow_maximal_tree(d, p), d, p);
    Params pk = p;
    pk.k = static_cast<int>(pruned.leaf_count());
    std::vector<cubt::MergeRecord> trace;
    auto joined = cubt::join(pruned, d, pk, &trace);
    CHECK(trace.empty());
    CHECK(joined.cluster_map.size() == static_cast<std::size_t>(pruned.leaf_count()));
}

TEST_CASE("known k performs exactly leaf-count-minus-k merges") {
    Dataset d = two_blobs(25, 25.0, 10);
    Params p;
    p.mindev = 0.001;
    p.minsize = 5;
    p.k = 2;
    auto pruned = cubt::prune(cubt::grow_maximal_tree(d, p), d, p);
    std::vector<cubt::MergeRecord> trace;
    auto joined = cubt::join(pruned, d, p, &trace);
    CHECK(trace.size() == static_cast<std::size_t>(pruned.leaf_count() - 2));

    std::set<int> labels;
    for (const auto& [leaf, label] : joined.cluster_map) labels.insert(label);
    CHECK(labels == std::set<int>{1, 2});
}

TEST_CASE("unknown k stops at the frozen quantile threshold") {
    Dataset d = two_blobs(25, 40.0, 11);
    Params p;
    p.mindev = 0.001;
    p.minsize = 5;
    p.eta_quantile = 0.45;
    auto pruned = cubt::prune(cubt::grow_maximal_tree(d, p), d, p);
    auto joined = cubt::join(pruned, d, p);

    std::set<int> labels;
    for (const auto& [leaf, label] : joined.cluster_map) labels.insert(label);
    CHECK(labels.size() == 2);  // the two blobs
    CHECK(joined.stage == cubt::Stage::joined);
}

TEST_CASE("skipping the prune threshold does not change the final partition") {
    // All sibling merges here sit far below 0.3, so pruning first (or not)
    // must lead the join stage to the same allocation.
    Dataset d = two_blobs(30, 50.0, 12);
    Params with_prune;
    with_prune.mindev = 0.001;
    with_prune.minsize = 5;
    with_prune.eta_quantile = 0.45;
    with_prune.mindist = 0.3;
    Params no_prune = with_prune;
    no_prune.mindist = 0.0;

    const auto a = cubt::fit(d, with_prune);
    const auto b = cubt::fit(d, no_prune);
    CHECK(a.assignments == b.assignments);
}
