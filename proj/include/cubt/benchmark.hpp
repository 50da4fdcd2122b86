#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubt/datagen.hpp"
#include "cubt/params.hpp"

namespace cubt {

/// One point of the tuning grid. Known-k runs grow through the mindev
/// fallback sequence when needed; unknown-k runs use mindev as given.
struct CubtSetting {
    int minsize = 1;
    double mindev = 0.8;
    double mindist = 0.0;
    double delta = 0.2;

    std::string hash() const;  // short stable id for report rows
};

struct BenchmarkCase {
    Model model = Model::M1;
    double sigma = 0.0;
    int per_group = 0;  // 0 = model default
    double eta_quantile = 0.2;
    std::vector<CubtSetting> grid;
};

struct BenchmarkConfig {
    std::uint64_t seed = 1;
    int replicates = 25;
    int threads = 0;  // 0 = hardware concurrency
    bool run_known_k = true;
    bool run_unknown_k = true;
    bool run_kmeans = true;
    std::vector<BenchmarkCase> cases;

    std::string to_json() const;
    static BenchmarkConfig from_json(const std::string& text);
};

struct BenchmarkRow {
    std::string model;
    double sigma = 0.0;
    std::string method;       // cubt_known | cubt_eta | kmeans | kmeans10
    std::string params_hash;  // "-" for the k-means rows
    double mce = 0.0;
    int k_found = 0;
    std::uint64_t seed = 0;
    std::string status;  // "ok" or "error:<Type>"
};

struct BenchmarkAggregate {
    std::string model;
    double sigma = 0.0;
    std::string method;
    std::string params_hash;
    double mean_mce = 0.0;
    int correct_k = 0;  // replicates with k_found == true k
    int replicates = 0;
    int failures = 0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    std::vector<BenchmarkAggregate> aggregates;

    std::string rows_csv() const;
    std::string aggregates_csv() const;
    std::string summary_table() const;

    /// Smallest mean MCE among ok aggregates of this model/sigma/method.
    double best_mean_mce(const std::string& model, double sigma, const std::string& method) const;
    /// Largest correct-k count among aggregates of this model/sigma/method.
    int best_correct_k(const std::string& model, double sigma, const std::string& method) const;
};

/// Runs every (case, setting, replicate) cell; replicates execute in a
/// worker pool and rows come back in a fixed order regardless of
/// completion order.
BenchmarkReport run_benchmark(const BenchmarkConfig& config);

/// The desk-scale reproduction config: 25 replicates of M1-M4 plus the
/// rotated three-group sample, with the per-model grids the reports use.
BenchmarkConfig desk_scale_config();

}  // namespace cubt
