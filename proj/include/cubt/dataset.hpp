#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace cubt {

/// n x p sample matrix with optional ground-truth labels and names.
/// Rows are observations, columns are variables. Immutable by convention
/// once built: every pipeline stage takes a const reference.
struct Dataset {
    std::vector<double> values;  // row-major, n_rows * n_cols
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<int> labels;                 // empty or n_rows entries, contiguous {1..R}
    std::vector<std::string> column_names;   // empty or n_cols entries
    std::vector<std::string> row_names;      // empty or n_rows entries

    double at(std::size_t i, std::size_t j) const { return values[i * n_cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n_cols + j]; }
    const double* row(std::size_t i) const { return values.data() + i * n_cols; }
    bool has_labels() const { return !labels.empty(); }

    /// Number of distinct label values (labels must be contiguous {1..R}).
    int label_count() const;

    /// Throws if the shape, finiteness or label invariants are broken.
    void validate() const;
};

/// Squared Euclidean distance between rows i and j.
double row_distance_sq(const Dataset& a, std::size_t i, const Dataset& b, std::size_t j);

/// Returns a copy with every non-constant column rescaled to mean 0 and
/// variance 1 (divisor n), constant columns mapped to zero. Labels and
/// names carry through.
Dataset standardize_dataset(const Dataset& data);

/// CSV ingestion. Header row optional; a trailing column named "label"
/// is read as ground truth. Comma separator, decimal point.
Dataset read_csv(const std::string& path);
Dataset read_csv(std::istream& in, const std::string& origin);

/// Writes values (and the label column when present) back out.
void write_csv(const Dataset& data, const std::string& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Shortest round-trip decimal form of x (used by every text emitter so
/// identical runs produce identical bytes).
std::string format_double(double x);

}  // namespace cubt
