#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbsel/matrix.hpp"

namespace imbsel {

/// Feature matrix plus binary labels (1 = positive / minority / fraud).
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::string source_tag;

    std::size_t rows() const noexcept { return labels.size(); }
    std::size_t width() const noexcept { return features.cols(); }
    std::size_t positives() const noexcept;
    std::size_t negatives() const noexcept { return rows() - positives(); }

    /// Throws DataError when the shape or label invariants are broken.
    void validate() const;
};

struct CsvSchema {
    std::string label_column = "Class";
    /// Raw cell value mapped to 1. When empty, the minority value becomes 1.
    std::string positive_label;
};

struct LoadResult {
    Dataset data;
    std::vector<std::string> warnings;
};

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Parses CSV text already in memory; `tag` names the source in errors.
LoadResult parse_csv(std::string_view text, const CsvSchema& schema, const std::string& tag);

/// Writes features and labels back out with full round-trip precision.
void write_csv(const std::filesystem::path& path, const Dataset& d,
               const std::string& label_column = "Class");

struct StandardizationParams {
    std::vector<std::string> columns;
    std::vector<double> mean;
    std::vector<double> stddev;
    /// Columns whose stddev was zero and has been replaced by 1.
    std::vector<std::string> constant_columns;
};

StandardizationParams fit_standardizer(const Dataset& d, std::span<const std::string> columns);
Dataset apply_standardizer(const Dataset& d, const StandardizationParams& s);

struct SplitIndices {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    std::optional<std::vector<int>> fold_assignments;
};

/// Per-class sampling without replacement; both index lists come back sorted.
SplitIndices stratified_split(const Dataset& d, double test_fraction, std::uint64_t seed);

/// Fold id in [0, n_folds) for each entry of `rows`; `labels` is indexed by row id.
std::vector<int> stratified_folds(std::span<const std::size_t> rows, std::span<const int> labels,
                                  int n_folds, std::uint64_t seed);

/// Rows of `d` picked by `idx`, preserving names and tag.
Dataset subset(const Dataset& d, std::span<const std::size_t> idx);

/// Dataset restricted to the named columns, in the given order.
Dataset select_columns(const Dataset& d, std::span<const std::string> columns);

std::size_t column_index(const Dataset& d, const std::string& name);

/// FNV-1a over feature bits, labels and names.
std::uint64_t checksum(const Dataset& d);

/// Round half away from zero.
long long round_half_away(double x) noexcept;

}  // namespace imbsel
