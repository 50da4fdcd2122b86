#include "cubt/datagen.hpp"

#include <cmath>
#include <numbers>

#include "cubt/errors.hpp"
#include "cubt/rng.hpp"

namespace cubt {

Model model_from_name(const std::string& name) {
    if (name == "M1") return Model::M1;
    if (name == "M2") return Model::M2;
    if (name == "M3") return Model::M3;
    if (name == "M4") return Model::M4;
    if (name == "cart") return Model::CartComparison;
    throw UnknownModel("unknown model '" + name + "' (expected M1, M2, M3, M4 or cart)");
}

std::string model_name(Model m) {
    switch (m) {
        case Model::M1: return "M1";
        case Model::M2: return "M2";
        case Model::M3: return "M3";
        case Model::M4: return "M4";
        case Model::CartComparison: return "cart";
    }
    return "M1";
}

int default_per_group(Model m) {
    switch (m) {
        case Model::M1: return 100;
        case Model::M2: return 30;
        case Model::M3: return 150;
        case Model::M4: return 25;
        case Model::CartComparison: return 100;
    }
    return 100;
}

int true_group_count(Model m) {
    switch (m) {
        case Model::M1: return 4;
        case Model::M2: return 10;
        case Model::M3: return 2;
        case Model::M4: return 3;
        case Model::CartComparison: return 3;
    }
    return 1;
}

namespace {

// Spherical Gaussian groups around the given centers, one group after
// another, coordinates drawn row by row.
Dataset gaussian_groups(const std::vector<std::vector<double>>& centers, double sigma,
                        int per_group, std::uint64_t seed) {
    const std::size_t p = centers.front().size();
    Dataset data;
    data.n_cols = p;
    data.n_rows = centers.size() * static_cast<std::size_t>(per_group);
    data.values.reserve(data.n_rows * p);
    data.labels.reserve(data.n_rows);
    Rng rng(seed);
    for (std::size_t g = 0; g < centers.size(); ++g) {
        for (int i = 0; i < per_group; ++i) {
            for (std::size_t j = 0; j < p; ++j)
                data.values.push_back(rng.normal(centers[g][j], sigma));
            data.labels.push_back(static_cast<int>(g) + 1);
        }
    }
    return data;
}

Dataset rings(int per_ring, std::uint64_t seed) {
    Dataset data;
    data.n_cols = 2;
    data.n_rows = 2 * static_cast<std::size_t>(per_ring);
    data.values.reserve(data.n_rows * 2);
    data.labels.reserve(data.n_rows);
    Rng rng(seed);
    const double bounds[2][2] = {{50.0, 80.0}, {200.0, 230.0}};
    for (int ring = 0; ring < 2; ++ring) {
        for (int i = 0; i < per_ring; ++i) {
            const double r = rng.uniform(bounds[ring][0], bounds[ring][1]);
            const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            data.values.push_back(r * std::cos(theta));
            data.values.push_back(r * std::sin(theta));
            data.labels.push_back(ring + 1);
        }
    }
    return data;
}

}  // namespace

Dataset generate(const ModelSpec& spec) {
    const int per_group = spec.per_group > 0 ? spec.per_group : default_per_group(spec.model);
    const bool needs_sigma =
        spec.model == Model::M1 || spec.model == Model::M2 || spec.model == Model::M4;
    if (needs_sigma && !(spec.sigma > 0.0))
        throw BadSigma("model " + model_name(spec.model) + " needs sigma > 0");

    Dataset data;
    switch (spec.model) {
        case Model::M1:
            data = gaussian_groups({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}, spec.sigma, per_group,
                                   spec.seed);
            break;
        case Model::M2: {
            // Groups 1..5 sit at +e_1..+e_5, groups 6..10 at -e_1..-e_5. The
            // sigma knob maps to a per-coordinate sd of sigma/5 (one part per
            // dimension), so the working grid 0.7..0.9 spans near-separated to
            // mildly overlapping groups rather than one indistinguishable blob.
            std::vector<std::vector<double>> centers;
            for (double sign : {1.0, -1.0})
                for (std::size_t axis = 0; axis < 5; ++axis) {
                    std::vector<double> c(5, 0.0);
                    c[axis] = sign;
                    centers.push_back(c);
                }
            data = gaussian_groups(centers, spec.sigma / 5.0, per_group, spec.seed);
            break;
        }
        case Model::M3:
            data = rings(per_group, spec.seed);
            break;
        case Model::M4: {
            std::vector<std::vector<double>> centers(3, std::vector<double>(50, 0.0));
            for (std::size_t j = 0; j < 50; ++j) {
                centers[0][j] = 0.1;
                centers[2][j] = -0.1;
            }
            data = gaussian_groups(centers, spec.sigma, per_group, spec.seed);
            break;
        }
        case Model::CartComparison:
            data = generate_cart_comparison(spec.seed);
            break;
    }
    data.validate();
    return data;
}

Dataset generate_cart_comparison(std::uint64_t seed) {
    // Three anisotropic groups: per-coordinate variances (0.03, 0.25) or
    // flipped, group means (0,0), (2,1), (1,2.5), all rotated by pi/4.
    const double sd_tight = std::sqrt(0.03);
    const double sd_wide = std::sqrt(0.25);
    struct GroupDef {
        double mx, my, sx, sy;
    };
    const GroupDef defs[3] = {
        {0.0, 0.0, sd_tight, sd_wide},
        {2.0, 1.0, sd_tight, sd_wide},
        {1.0, 2.5, sd_wide, sd_tight},
    };
    const double c = std::cos(std::numbers::pi / 4.0);
    const double s = std::sin(std::numbers::pi / 4.0);

    Dataset data;
    data.n_cols = 2;
    data.n_rows = 300;
    data.values.reserve(600);
    data.labels.reserve(300);
    Rng rng(seed);
    for (int g = 0; g < 3; ++g) {
        for (int i = 0; i < 100; ++i) {
            const double x = rng.normal(defs[g].mx, defs[g].sx);
            const double y = rng.normal(defs[g].my, defs[g].sy);
            data.values.push_back(c * x - s * y);
            data.values.push_back(s * x + c * y);
            data.labels.push_back(g + 1);
        }
    }
    data.validate();
    return data;
}

Dataset load_european_jobs(const std::string& path) {
    Dataset data = read_csv(path);
    if (data.n_cols != 9)
        throw DimensionError(path + ": expected nine sector columns, got " +
                             std::to_string(data.n_cols));
    if (data.row_names.empty()) throw ParseError(path + ": expected a leading name column");
    return data;
}

}  // namespace cubt
