#include "cubt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cubt/errors.hpp"

namespace cubt {

int Dataset::label_count() const {
    if (labels.empty()) return 0;
    return *std::max_element(labels.begin(), labels.end());
}

void Dataset::validate() const {
    if (n_rows == 0 || n_cols == 0) throw EmptyDataset("dataset has no rows or no columns");
    if (values.size() != n_rows * n_cols)
        throw LengthMismatch("value buffer does not match n_rows * n_cols");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw ParseError("non-finite value at flat index " + std::to_string(i));
    if (!labels.empty()) {
        if (labels.size() != n_rows) throw LengthMismatch("label vector length differs from n_rows");
        const int top = *std::max_element(labels.begin(), labels.end());
        std::set<int> seen(labels.begin(), labels.end());
        if (*seen.begin() < 1) throw InvalidParam("labels must be positive");
        for (int v = 1; v <= top; ++v)
            if (!seen.count(v))
                throw InvalidParam("labels must cover 1.." + std::to_string(top) +
                                   " without gaps; missing " + std::to_string(v));
    }
    if (!column_names.empty() && column_names.size() != n_cols)
        throw LengthMismatch("column_names length differs from n_cols");
    if (!row_names.empty() && row_names.size() != n_rows)
        throw LengthMismatch("row_names length differs from n_rows");
}

double row_distance_sq(const Dataset& a, std::size_t i, const Dataset& b, std::size_t j) {
    const double* x = a.row(i);
    const double* y = b.row(j);
    double s = 0.0;
    for (std::size_t c = 0; c < a.n_cols; ++c) {
        const double d = x[c] - y[c];
        s += d * d;
    }
    return s;
}

Dataset standardize_dataset(const Dataset& data) {
    data.validate();
    Dataset out = data;
    const double n = static_cast<double>(data.n_rows);
    for (std::size_t j = 0; j < data.n_cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < data.n_rows; ++i) mean += data.at(i, j);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < data.n_rows; ++i) {
            const double d = data.at(i, j) - mean;
            var += d * d;
        }
        var /= n;
        if (var == 0.0) {
            for (std::size_t i = 0; i < data.n_rows; ++i) out.at(i, j) = 0.0;
        } else {
            const double sd = std::sqrt(var);
            for (std::size_t i = 0; i < data.n_rows; ++i) out.at(i, j) = (data.at(i, j) - mean) / sd;
        }
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

}  // namespace

Dataset read_csv(std::istream& in, const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw EmptyDataset(origin + ": no data rows");

    // A header is any first line with a field that does not parse as a number.
    double tmp = 0.0;
    bool header = false;
    for (const auto& f : rows[0])
        if (!parse_double(f, tmp)) header = true;

    std::vector<std::string> names;
    std::size_t first = 0;
    if (header) {
        names = rows[0];
        first = 1;
        if (rows.size() == 1) throw EmptyDataset(origin + ": header but no data rows");
    }

    const std::size_t width = rows[first].size();
    const bool with_labels = header && !names.empty() && names.back() == "label";
    // A non-numeric first field on the first data row marks a name column.
    double probe = 0.0;
    const bool with_names = width > 1 && !parse_double(rows[first][0], probe);
    const std::size_t skip = with_names ? 1 : 0;
    if (width < skip + (with_labels ? 1 : 0) + 1)
        throw EmptyDataset(origin + ": no value columns");
    const std::size_t n_cols = width - skip - (with_labels ? 1 : 0);
    if (header && names.size() != width)
        throw ParseError(origin + ": header width differs from data width");

    Dataset data;
    data.n_cols = n_cols;
    if (header)
        data.column_names.assign(names.begin() + static_cast<long>(skip),
                                 names.begin() + static_cast<long>(skip + n_cols));
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        if (fields.size() != width)
            throw ParseError(origin + ": row " + std::to_string(r + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(width));
        if (with_names) data.row_names.push_back(fields[0]);
        for (std::size_t c = skip; c < skip + n_cols; ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v))
                throw ParseError(origin + ": row " + std::to_string(r + 1) + ", field '" +
                                 fields[c] + "' is not a number");
            data.values.push_back(v);
        }
        if (with_labels) {
            double v = 0.0;
            if (!parse_double(fields[width - 1], v) || v != std::floor(v))
                throw ParseError(origin + ": row " + std::to_string(r + 1) +
                                 " label is not an integer");
            data.labels.push_back(static_cast<int>(v));
        }
    }
    data.n_rows = rows.size() - first;
    data.validate();
    return data;
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_csv(in, path);
}

void write_csv(const Dataset& data, std::ostream& out) {
    const bool row_names = !data.row_names.empty();
    // A label column is only recognizable on read through the header, so
    // any labeled dataset gets one even without explicit column names.
    if (!data.column_names.empty() || data.has_labels()) {
        if (row_names) out << "name,";
        for (std::size_t j = 0; j < data.n_cols; ++j) {
            if (j) out << ',';
            if (data.column_names.empty())
                out << 'X' << (j + 1);
            else
                out << data.column_names[j];
        }
        if (data.has_labels()) out << ",label";
        out << '\n';
    }
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        if (row_names) out << data.row_names[i] << ',';
        for (std::size_t j = 0; j < data.n_cols; ++j) {
            if (j) out << ',';
            out << format_double(data.at(i, j));
        }
        if (data.has_labels()) out << ',' << data.labels[i];
        out << '\n';
    }
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_csv(data, out);
    if (!out) throw IoError("failed writing " + path);
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace cubt
