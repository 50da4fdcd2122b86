#pragma once

#include <cstdint>
#include <string>

#include "cubt/dataset.hpp"

namespace cubt {

/// Benchmark generators. M1: four Gaussian groups in the plane around
/// (+-1,0),(0,+-1). M2: ten Gaussian groups in R^5 at +-e_1..+-e_5.
/// M3: two concentric uniform rings. M4: three Gaussian groups in R^50
/// at +-0.1 and 0. CartComparison: the rotated three-group sample.
enum class Model { M1, M2, M3, M4, CartComparison };

Model model_from_name(const std::string& name);  // throws UnknownModel
std::string model_name(Model m);

struct ModelSpec {
    Model model = Model::M1;
    double sigma = 0.0;  // ignored by M3 and CartComparison
    int per_group = 0;   // 0 picks the model default (100/30/150/25/100)
    std::uint64_t seed = 0;
};

int default_per_group(Model m);
int true_group_count(Model m);

/// Labeled sample drawn per the given ModelSpec; deterministic in the seed.
Dataset generate(const ModelSpec& spec);

/// Three correlated Gaussian groups of 100 points rotated by pi/4.
Dataset generate_cart_comparison(std::uint64_t seed);

/// Sector-employment table: one name column followed by the nine sector
/// percentages A,M,MA,P,C,SI,F,S,T. Country names land in row_names.
Dataset load_european_jobs(const std::string& path);

}  // namespace cubt
