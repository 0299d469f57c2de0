#include <iostream>

#include <CLI11.hpp>

#include "imbsel/app.hpp"
#include "imbsel/error.hpp"
#include "imbsel/fixtures.hpp"
#include "imbsel/metrics.hpp"

int main(int argc, char** argv) {
    CLI::App app{"imbsel: classifier/sampler/PCA-dimension grid search for imbalanced binary data"};
    app.require_subcommand(1);

    std::string config_path;
    imbsel::RunOverrides overrides;

    auto* run = app.add_subcommand("run", "run the grid described by a config file");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { overrides.seed = v; },
                                            "override master_seed");
    run->add_option_function<int>("--workers", [&](const int& v) { overrides.workers = v; }, "worker threads")
        ->check(CLI::PositiveNumber);
    run->add_option_function<std::string>("--out", [&](const std::string& v) { overrides.out_dir = v; },
                                          "output directory");
    run->add_option_function<std::string>("--metric", [&](const std::string& v) { overrides.metric = v; },
                                          "ranking metric")
        ->check(CLI::IsMember(imbsel::metric_keys()));
    run->add_option_function<std::size_t>("--top-k", [&](const std::size_t& v) { overrides.top_k = v; },
                                          "ensemble size");

    auto* val = app.add_subcommand("validate", "report every problem in a config file");
    val->add_option("--config", config_path, "config file")->required();

    imbsel::FixtureParams fx;
    std::string kind = "gaussian-imbalanced";
    std::string out_path;
    auto* fix = app.add_subcommand("make-fixture", "write a synthetic imbalanced CSV");
    fix->add_option("--kind", kind, "gaussian-imbalanced | segment-minority")
        ->check(CLI::IsMember({"gaussian-imbalanced", "segment-minority"}));
    fix->add_option("--rows,-n", fx.rows, "row count (>= 10)");
    fix->add_option("--ratio", fx.imbalance_ratio, "positive fraction in (0, 0.5]");
    fix->add_option("--seed", fx.seed, "generator seed");
    fix->add_option("--features", fx.features, "feature count");
    fix->add_option("--out", out_path, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : imbsel::exit_config_error;
    }

    try {
        if (*run) return imbsel::run_command(config_path, overrides, std::cerr);
        if (*val) return imbsel::validate_command(config_path, std::cout);
        fx.kind = imbsel::fixture_kind_from_string(kind);
        imbsel::write_fixture(fx, out_path);
        std::cout << out_path << '\n';
        return imbsel::exit_ok;
    } catch (const imbsel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return imbsel::exit_config_error;
    } catch (const imbsel::DataError& e) {
        std::cerr << "dataset error: " << e.what() << '\n';
        return imbsel::exit_dataset_error;
    }
}
