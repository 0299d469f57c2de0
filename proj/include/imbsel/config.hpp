#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imbsel/data_io.hpp"
#include "imbsel/search.hpp"

namespace imbsel {

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string message;

    bool is_error() const noexcept { return severity == Severity::error; }
};

/// Everything a `run` needs, captured from one config file.
struct RunConfig {
    std::filesystem::path dataset_path;
    CsvSchema schema;
    GridConfig grid;
    RunOptions options;
    std::filesystem::path output_dir = "out";
    bool write_csv = true;
    bool write_json = true;
    /// Directory the config file lives in; relative paths resolve against it.
    std::filesystem::path base_dir;
};

struct ParsedConfig {
    RunConfig config;
    std::vector<Diagnostic> diagnostics;

    bool ok() const;
};

/// Parses the INI-style run configuration. Problems are collected, not thrown.
ParsedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ParsedConfig load_config(const std::filesystem::path& path);

/// Parses "1-5, 8, 10-12" into an expanded list.
std::optional<std::vector<std::size_t>> parse_dims_list(std::string_view text);

/// Checks that need the filesystem: dataset presence, header, dims vs width.
/// Reads only the CSV header.
std::vector<Diagnostic> check_against_dataset(const RunConfig& cfg);

/// Full validation: parse diagnostics plus dataset-dependent checks.
std::vector<Diagnostic> validate_config_file(const std::filesystem::path& path);

}  // namespace imbsel
