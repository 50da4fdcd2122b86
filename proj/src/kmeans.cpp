#include "cubt/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "cubt/errors.hpp"
#include "cubt/rng.hpp"

namespace cubt {

namespace {

double point_center_sq(const Dataset& data, std::size_t i, const std::vector<double>& centers,
                       int c, std::size_t p) {
    const double* x = data.row(i);
    const double* m = centers.data() + static_cast<std::size_t>(c) * p;
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const double d = x[j] - m[j];
        s += d * d;
    }
    return s;
}

int nearest_center(const Dataset& data, std::size_t i, const std::vector<double>& centers, int k,
                   std::size_t p) {
    int best = 0;
    double best_d = point_center_sq(data, i, centers, 0, p);
    for (int c = 1; c < k; ++c) {
        const double d = point_center_sq(data, i, centers, c, p);
        if (d < best_d) {  // ties keep the smaller index
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

KMeansModel kmeans(const Dataset& data, int k, std::uint64_t seed) {
    data.validate();
    if (k < 1 || static_cast<std::size_t>(k) > data.n_rows)
        throw KOutOfRange("k must lie in 1..n_rows");
    const std::size_t n = data.n_rows;
    const std::size_t p = data.n_cols;

    KMeansModel model;
    model.k = k;
    model.centers.resize(static_cast<std::size_t>(k) * p);

    Rng rng(seed);
    const auto picks = rng.sample_without_replacement(n, static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        std::copy_n(data.row(picks[static_cast<std::size_t>(c)]), p,
                    model.centers.begin() + static_cast<std::size_t>(c) * p);

    std::vector<int> assign(n, -1);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    constexpr int kMaxRounds = 300;
    for (int round = 0; round < kMaxRounds; ++round) {
        model.iterations = round + 1;
        bool changed = false;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest_center(data, i, model.centers, k, p);
            if (c != assign[i]) changed = true;
            assign[i] = c;
            ++counts[static_cast<std::size_t>(c)];
        }

        // An emptied cluster is reseeded at the point lying farthest from
        // its own center, provided taking it leaves the donor non-empty.
        std::set<std::size_t> moved;
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            double worst = -1.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (moved.count(i)) continue;
                if (counts[static_cast<std::size_t>(assign[i])] < 2) continue;
                const double d = point_center_sq(data, i, model.centers, assign[i], p);
                if (d > worst) {
                    worst = d;
                    pick = i;
                }
            }
            if (pick == n) continue;  // nothing stealable; leave the cluster empty
            --counts[static_cast<std::size_t>(assign[pick])];
            assign[pick] = c;
            ++counts[static_cast<std::size_t>(c)];
            moved.insert(pick);
            changed = true;
        }

        std::fill(model.centers.begin(), model.centers.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* m = model.centers.data() + static_cast<std::size_t>(assign[i]) * p;
            const double* x = data.row(i);
            for (std::size_t j = 0; j < p; ++j) m[j] += x[j];
        }
        for (int c = 0; c < k; ++c) {
            const int cnt = counts[static_cast<std::size_t>(c)];
            if (cnt == 0) continue;
            double* m = model.centers.data() + static_cast<std::size_t>(c) * p;
            for (std::size_t j = 0; j < p; ++j) m[j] /= cnt;
        }
        if (!changed) break;
    }

    model.assignments.resize(n);
    model.wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        model.assignments[i] = assign[i] + 1;
        model.wcss += point_center_sq(data, i, model.centers, assign[i], p);
    }
    return model;
}

KMeansModel kmeans_multi(const Dataset& data, int k, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw InvalidParam("restarts must be >= 1");
    KMeansModel best;
    double best_wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        KMeansModel m = kmeans(data, k, seed + static_cast<std::uint64_t>(r));
        if (m.wcss < best_wcss) {  // ties keep the earliest restart
            best_wcss = m.wcss;
            best = std::move(m);
        }
    }
    return best;
}

}  // namespace cubt
