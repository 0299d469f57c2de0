#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "imbsel/data_io.hpp"
#include "imbsel/rng.hpp"

namespace testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("imbsel_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

inline imbsel::Dataset make_dataset(std::size_t cols, const std::vector<double>& values, std::vector<int> labels) {
    imbsel::Dataset d;
    d.features = imbsel::Matrix(labels.size(), cols, values);
    d.labels = std::move(labels);
    for (std::size_t j = 0; j < cols; ++j) d.feature_names.push_back("f" + std::to_string(j + 1));
    d.source_tag = "test";
    return d;
}

/// Gaussian blobs: negatives at the origin, positives shifted by `shift` on every axis.
inline imbsel::Dataset blobs(std::size_t n_neg, std::size_t n_pos, std::size_t cols, double shift,
                             std::uint64_t seed) {
    imbsel::Rng rng(seed);
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n_neg + n_pos; ++i) {
        const bool pos = i >= n_neg;
        for (std::size_t j = 0; j < cols; ++j) values.push_back((pos ? shift : 0.0) + imbsel::standard_normal(rng));
        labels.push_back(pos ? 1 : 0);
    }
    return make_dataset(cols, values, labels);
}

}  // namespace testing
