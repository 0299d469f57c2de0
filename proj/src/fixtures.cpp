#include "imbsel/fixtures.hpp"

#include <numeric>

#include "imbsel/error.hpp"
#include "imbsel/rng.hpp"

namespace imbsel {

FixtureKind fixture_kind_from_string(std::string_view s) {
    if (s == "gaussian-imbalanced") return FixtureKind::gaussian_imbalanced;
    if (s == "segment-minority") return FixtureKind::segment_minority;
    throw ConfigError("unknown fixture kind '" + std::string(s) +
                      "' (expected gaussian-imbalanced or segment-minority)");
}

std::string_view to_string(FixtureKind k) {
    return k == FixtureKind::gaussian_imbalanced ? "gaussian-imbalanced" : "segment-minority";
}

Dataset make_fixture(const FixtureParams& p) {
    if (p.rows < 10) throw ConfigError("fixture needs at least 10 rows");
    if (!(p.imbalance_ratio > 0.0 && p.imbalance_ratio <= 0.5))
        throw ConfigError("fixture imbalance ratio must lie in (0, 0.5]");
    if (p.features < 1) throw ConfigError("fixture needs at least one feature");

    const auto n_pos = static_cast<std::size_t>(round_half_away(static_cast<double>(p.rows) * p.imbalance_ratio));
    if (n_pos == 0) throw ConfigError("fixture ratio yields zero positives");

    Rng rng(derive_seed(p.seed, {0xF1C5ULL}));
    const std::size_t w = p.features;

    Dataset d;
    d.features = Matrix(p.rows, w);
    d.labels.assign(p.rows, 0);
    for (std::size_t j = 0; j < w; ++j) d.feature_names.push_back("V" + std::to_string(j + 1));
    d.source_tag = "fixture:" + std::string(to_string(p.kind));

    std::vector<std::size_t> order(p.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span(order), rng);

    for (std::size_t k = 0; k < p.rows; ++k) {
        const std::size_t r = order[k];
        const bool pos = k < n_pos;
        d.labels[r] = pos ? 1 : 0;
        if (!pos) {
            for (std::size_t j = 0; j < w; ++j) d.features(r, j) = standard_normal(rng);
        } else if (p.kind == FixtureKind::gaussian_imbalanced) {
            for (std::size_t j = 0; j < w; ++j) d.features(r, j) = 1.0 + standard_normal(rng);
        } else {
            // Segment from (3, -3, 3, ...) to (6, 0, 6, ...).
            const double t = uniform01(rng);
            for (std::size_t j = 0; j < w; ++j) {
                const double start = (j % 2 == 0) ? 3.0 : -3.0;
                d.features(r, j) = start + 3.0 * t + 0.05 * standard_normal(rng);
            }
        }
    }
    return d;
}

void write_fixture(const FixtureParams& p, const std::filesystem::path& out_path) {
    write_csv(out_path, make_fixture(p));
}

}  // namespace imbsel
