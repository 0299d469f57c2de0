#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "imbsel/search.hpp"

namespace imbsel {

/// Leaderboard as CSV text; metrics printed with 4 decimals.
std::string leaderboard_csv(const Leaderboard& lb);

/// Leaderboard as JSON text with full-precision metrics.
std::string leaderboard_json(const Leaderboard& lb, const RunResult& run);

/// One wide CSV per (sampler, metric): a Dims column plus one column per
/// classifier, one row per dims_list entry. Returns file name -> contents.
std::vector<std::pair<std::string, std::string>> figure_series(const GridConfig& cfg, const RunResult& run,
                                                               const std::vector<std::string>& metrics);

struct ManifestInfo {
    std::string dataset_path;
    std::string dataset_checksum;  // hex FNV-1a of the file bytes
    std::size_t dataset_rows = 0;
    std::size_t dataset_width = 0;
    double wall_time_seconds = 0;
    int workers = 1;
};

std::string run_manifest_json(const GridConfig& cfg, const RunResult& run, const ManifestInfo& info);

/// Hex FNV-1a of a file's bytes.
std::string file_checksum(const std::filesystem::path& path);

/// Library version reported in manifests.
std::string_view version();

}  // namespace imbsel
