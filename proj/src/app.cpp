#include "imbsel/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "imbsel/error.hpp"
#include "imbsel/report.hpp"

namespace imbsel {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw DataError(DataError::Kind::missing_file, path.string() + ": cannot write");
}

void print(std::ostream& log, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) log << (d.is_error() ? "error: " : "warning: ") << d.message << '\n';
}

bool has_error(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

}  // namespace

void apply_overrides(RunConfig& cfg, const RunOverrides& o) {
    if (const char* env = std::getenv("IMBSEL_OUT_DIR"); env && *env) cfg.output_dir = env;
    if (o.out_dir) cfg.output_dir = *o.out_dir;
    if (o.seed) cfg.grid.master_seed = *o.seed;
    if (o.workers) cfg.options.workers = *o.workers;
    if (o.metric) cfg.grid.metric_key = *o.metric;
    if (o.top_k) cfg.grid.top_k = *o.top_k;
}

int validate_command(const std::filesystem::path& config_path, std::ostream& log) {
    const auto diags = validate_config_file(config_path);
    print(log, diags);
    if (diags.empty()) log << "ok\n";
    return has_error(diags) ? exit_config_error : exit_ok;
}

int run_command(const std::filesystem::path& config_path, const RunOverrides& o, std::ostream& log) {
    auto parsed = load_config(config_path);
    apply_overrides(parsed.config, o);
    auto diags = parsed.diagnostics;
    if (!has_error(diags)) {
        try {
            validate(parsed.config.grid);
        } catch (const ConfigError& e) {
            diags.push_back({Diagnostic::Severity::error, e.what()});
        }
        if (parsed.config.options.workers < 1) diags.push_back({Diagnostic::Severity::error, "workers must be >= 1"});
    }
    print(log, diags);
    if (has_error(diags)) return exit_config_error;
    return execute(parsed.config, log);
}

int execute(const RunConfig& cfg, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadResult loaded;
    try {
        loaded = load_csv(cfg.dataset_path, cfg.schema);
    } catch (const DataError& e) {
        log << "dataset error: " << e.what() << '\n';
        return exit_dataset_error;
    }
    for (const auto& w : loaded.warnings) log << "warning: " << w << '\n';

    RunResult result;
    try {
        result = run_grid(cfg.grid, loaded.data, cfg.options);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const DataError& e) {
        log << "dataset error: " << e.what() << '\n';
        return exit_dataset_error;
    }
    for (const auto& w : result.warnings) log << "warning: " << w << '\n';
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    try {
        std::filesystem::create_directories(cfg.output_dir / "figures");
        if (cfg.write_csv) write_text(cfg.output_dir / "leaderboard.csv", leaderboard_csv(result.leaderboard));
        if (cfg.write_json)
            write_text(cfg.output_dir / "leaderboard.json", leaderboard_json(result.leaderboard, result));

        std::vector<std::string> series{"f1", "gmean"};
        if (cfg.grid.metric_key != "f1" && cfg.grid.metric_key != "gmean") series.push_back(cfg.grid.metric_key);
        for (const auto& [name, text] : figure_series(cfg.grid, result, series))
            write_text(cfg.output_dir / "figures" / name, text);

        ManifestInfo info;
        info.dataset_path = cfg.dataset_path.string();
        info.dataset_checksum = file_checksum(cfg.dataset_path);
        info.dataset_rows = loaded.data.rows();
        info.dataset_width = loaded.data.width();
        info.wall_time_seconds = wall;
        info.workers = cfg.options.workers;
        write_text(cfg.output_dir / "run_manifest.json", run_manifest_json(cfg.grid, result, info));
    } catch (const std::filesystem::filesystem_error& e) {
        log << "output error: " << e.what() << '\n';
        return exit_dataset_error;
    } catch (const DataError& e) {
        log << "output error: " << e.what() << '\n';
        return exit_dataset_error;
    }

    log << "cells: " << result.grid_size << ", failed: " << result.failed_cells << ", output: "
        << cfg.output_dir.string() << '\n';
    if (!result.leaderboard.records.empty()) {
        const auto& best = result.leaderboard.records.front();
        log << "best: " << best.model << ' ' << best.sampler << " dims=" << best.dims_label << ' '
            << cfg.grid.metric_key << '=' << metric_value(best.metrics, cfg.grid.metric_key) << '\n';
    }
    if (result.vote_winner) log << "vote winner: " << *result.vote_winner << '\n';
    return result.failed_cells > 0 ? exit_failed_cells : exit_ok;
}

}  // namespace imbsel
