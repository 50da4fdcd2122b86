#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "cubt/dataset.hpp"
#include "cubt/errors.hpp"
#include "cubt/eval.hpp"
#include "cubt/grow.hpp"
#include "cubt/kmeans.hpp"
#include "cubt/rng.hpp"

using cubt::Dataset;

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

}  // namespace

TEST_CASE("one cluster reproduces the total within-sample scatter") {
    Dataset d = blobs({{0.0, 0.0}}, 40, 2.0, 1);
    auto model = cubt::kmeans(d, 1, 7);
    std::vector<int> all;
    for (int i = 0; i < 40; ++i) all.push_back(i);
    const double scatter = static_cast<double>(d.n_rows) * cubt::node_deviance(d, all);
    CHECK(model.wcss == doctest::Approx(scatter).epsilon(1e-9));
    CHECK(std::all_of(model.assignments.begin(), model.assignments.end(),
                      [](int a) { return a == 1; }));
}

TEST_CASE("as many clusters as points gives zero scatter") {
    Dataset d = blobs({{0.0}}, 12, 1.0, 2);
    auto model = cubt::kmeans(d, 12, 3);
    CHECK(model.wcss == doctest::Approx(0.0));
    std::set<int> seen(model.assignments.begin(), model.assignments.end());
    CHECK(seen.size() == 12);
}

TEST_CASE("well-separated groups are recovered from any seed") {
    Dataset d = blobs({{0, 0}, {20, 0}, {0, 20}}, 30, 0.5, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto model = cubt::kmeans_multi(d, 3, 10, seed);
        CHECK(cubt::mce(d.labels, model.assignments) == doctest::Approx(0.0));
    }
}

TEST_CASE("labels are one-based and every cluster is populated") {
    Dataset d = blobs({{0, 0}, {5, 5}}, 25, 1.5, 5);
    for (int k : {2, 3, 5}) {
        auto model = cubt::kmeans(d, k, 11);
        std::set<int> seen(model.assignments.begin(), model.assignments.end());
        CHECK(*seen.begin() >= 1);
        CHECK(*seen.rbegin() <= k);
        CHECK(static_cast<int>(seen.size()) == k);
    }
}

TEST_CASE("each point sits with its nearest center") {
    Dataset d = blobs({{0, 0}, {4, 1}, {-3, 2}}, 20, 1.0, 6);
    auto model = cubt::kmeans(d, 3, 9);
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int c = 0; c < 3; ++c) {
            double dist = 0.0;
            for (std::size_t j = 0; j < d.n_cols; ++j) {
                const double diff = d.at(i, j) - model.centers[c * d.n_cols + j];
                dist += diff * diff;
            }
            if (dist < best) {  // strict: ties stay with the smaller index
                best = dist;
                arg = c + 1;
            }
        }
        CHECK(model.assignments[i] == arg);
    }
}

TEST_CASE("restarts never increase the objective") {
    Dataset d = blobs({{0, 0}, {3, 0}, {0, 3}, {3, 3}}, 15, 1.0, 7);
    const std::uint64_t seed = 42;
    auto multi = cubt::kmeans_multi(d, 4, 8, seed);
    for (int r = 0; r < 8; ++r) {
        auto single = cubt::kmeans(d, 4, seed + static_cast<std::uint64_t>(r));
        CHECK(multi.wcss <= single.wcss + 1e-12);
    }
    auto one = cubt::kmeans_multi(d, 4, 1, seed);
    auto plain = cubt::kmeans(d, 4, seed);
    CHECK(one.wcss == plain.wcss);
    CHECK(one.assignments == plain.assignments);
}

TEST_CASE("fits are reproducible for a fixed seed") {
    Dataset d = blobs({{0, 0}, {2, 2}}, 30, 1.0, 8);
    auto a = cubt::kmeans_multi(d, 2, 5, 123);
    auto b = cubt::kmeans_multi(d, 2, 5, 123);
    CHECK(a.assignments == b.assignments);
    CHECK(a.wcss == b.wcss);
    CHECK(a.centers == b.centers);
}

TEST_CASE("requests outside the feasible range are rejected") {
    Dataset d = blobs({{0.0}}, 5, 1.0, 9);
    CHECK_THROWS_AS(cubt::kmeans(d, 0, 1), cubt::KOutOfRange);
    CHECK_THROWS_AS(cubt::kmeans(d, 6, 1), cubt::KOutOfRange);
    CHECK_THROWS_AS(cubt::kmeans_multi(d, 2, 0, 1), cubt::InvalidParam);
}
