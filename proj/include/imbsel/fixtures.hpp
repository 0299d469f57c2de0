#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "imbsel/data_io.hpp"

namespace imbsel {

enum class FixtureKind {
    /// Two isotropic Gaussian blobs; positives shifted by 1 along every axis.
    gaussian_imbalanced,
    /// Negatives Gaussian, positives spread along one line segment plus small noise.
    segment_minority,
};

FixtureKind fixture_kind_from_string(std::string_view s);
std::string_view to_string(FixtureKind k);

struct FixtureParams {
    FixtureKind kind = FixtureKind::gaussian_imbalanced;
    std::size_t rows = 1000;
    double imbalance_ratio = 0.05;  // fraction of positives, in (0, 0.5]
    std::uint64_t seed = 1;
    std::size_t features = 5;
};

/// Positives = round(rows * ratio); rows are shuffled. Columns are V1..Vp, Class.
/// Throws ConfigError on bad parameters.
Dataset make_fixture(const FixtureParams& p);

/// make_fixture + write_csv. Throws DataError when the path cannot be written.
void write_fixture(const FixtureParams& p, const std::filesystem::path& out_path);

}  // namespace imbsel
