#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "imbsel/config.hpp"

namespace imbsel {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_dataset_error = 3,
    exit_failed_cells = 4,
};

/// Command-line values that win over the config file (and the env override).
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::string> metric;
    std::optional<std::size_t> top_k;
};

/// Applies IMBSEL_OUT_DIR, then the overrides, to a parsed config.
void apply_overrides(RunConfig& cfg, const RunOverrides& o);

/// Loads, validates and runs a config, writing every report into the output
/// directory. Progress and diagnostics go to `log`.
int run_command(const std::filesystem::path& config_path, const RunOverrides& o, std::ostream& log);

/// Prints diagnostics; returns exit_ok when none are errors.
int validate_command(const std::filesystem::path& config_path, std::ostream& log);

/// Runs an already-parsed config and writes reports.
int execute(const RunConfig& cfg, std::ostream& log);

}  // namespace imbsel
