#include "cubt/eval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "cubt/errors.hpp"

namespace cubt {

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ConfusionMatrix confusion_matrix(const std::vector<int>& true_labels,
                                 const std::vector<int>& pred_labels) {
    if (true_labels.empty() || pred_labels.empty())
        throw EmptyLabels("confusion matrix needs non-empty label vectors");
    if (true_labels.size() != pred_labels.size())
        throw LengthMismatch("label vectors differ in length");

    const std::set<int> rset(true_labels.begin(), true_labels.end());
    const std::set<int> cset(pred_labels.begin(), pred_labels.end());
    ConfusionMatrix m;
    m.row_values.assign(rset.begin(), rset.end());
    m.col_values.assign(cset.begin(), cset.end());
    m.rows = m.row_values.size();
    m.cols = m.col_values.size();
    m.counts.assign(m.rows * m.cols, 0);

    const auto row_of = [&](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(m.row_values.begin(), m.row_values.end(), v) - m.row_values.begin());
    };
    const auto col_of = [&](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(m.col_values.begin(), m.col_values.end(), v) - m.col_values.begin());
    };
    for (std::size_t i = 0; i < true_labels.size(); ++i)
        ++m.counts[row_of(true_labels[i]) * m.cols + col_of(pred_labels[i])];
    return m;
}

namespace {

// Zero-padded square view of the counts: entry (r, c) for r or c beyond
// the real matrix contributes nothing to any matching.
std::int64_t padded(const ConfusionMatrix& m, std::size_t r, std::size_t c) {
    if (r >= m.rows || c >= m.cols) return 0;
    return m.at(r, c);
}

}  // namespace

std::int64_t max_agreement_exhaustive(const ConfusionMatrix& m) {
    const std::size_t s = std::max(m.rows, m.cols);
    std::vector<std::size_t> perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t best = 0;
    do {
        std::int64_t sum = 0;
        for (std::size_t r = 0; r < s; ++r) sum += padded(m, r, perm[r]);
        best = std::max(best, sum);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::int64_t max_agreement_hungarian(const ConfusionMatrix& m) {
    // Potential-based assignment on the negated counts; exact because
    // every quantity stays integral.
    const std::size_t s = std::max(m.rows, m.cols);
    const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    const auto cost = [&](std::size_t r, std::size_t c) { return -padded(m, r, c); };

    std::vector<std::int64_t> u(s + 1, 0), v(s + 1, 0), minv(s + 1, 0);
    std::vector<std::size_t> match(s + 1, 0), way(s + 1, 0);
    std::vector<bool> used(s + 1, false);

    for (std::size_t i = 1; i <= s; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            std::int64_t delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= s; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= s; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::int64_t agreement = 0;
    for (std::size_t j = 1; j <= s; ++j) agreement += padded(m, match[j] - 1, j - 1);
    return agreement;
}

double mce(const std::vector<int>& true_labels, const std::vector<int>& pred_labels) {
    const ConfusionMatrix m = confusion_matrix(true_labels, pred_labels);
    const std::size_t s = std::max(m.rows, m.cols);
    const std::int64_t agree = s <= 8 ? max_agreement_exhaustive(m) : max_agreement_hungarian(m);
    return 1.0 - static_cast<double>(agree) / static_cast<double>(m.total());
}

int recovered_k_tally(const std::vector<ClusterResult>& results, int true_k) {
    int n = 0;
    for (const auto& r : results)
        if (r.k_found == true_k) ++n;
    return n;
}

}  // namespace cubt
