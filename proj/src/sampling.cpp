#include "imbsel/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbsel/classifiers.hpp"
#include "imbsel/error.hpp"
#include "imbsel/neighbors.hpp"
#include "imbsel/rng.hpp"

namespace imbsel {

namespace {

struct KindInfo {
    SamplerKind kind;
    std::string_view id;
    std::string_view display;
};

constexpr KindInfo kinds[] = {
    {SamplerKind::none, "none", "UB"},
    {SamplerKind::random_under, "random_under", "U:R"},
    {SamplerKind::instance_hardness_threshold, "instance_hardness_threshold", "U:I"},
    {SamplerKind::random_over, "random_over", "O:R"},
    {SamplerKind::smote, "smote", "O:S"},
    {SamplerKind::adasyn, "adasyn", "O:A"},
};

struct ClassRows {
    std::vector<std::size_t> minority;
    std::vector<std::size_t> majority;
};

ClassRows split_classes(const Dataset& d) {
    ClassRows c;
    for (std::size_t i = 0; i < d.rows(); ++i) (d.labels[i] == 1 ? c.minority : c.majority).push_back(i);
    if (c.minority.empty() || c.majority.empty())
        throw FitError("resample: training data must contain both classes");
    return c;
}

Dataset append_minority(const Dataset& train, const Matrix& synthetic) {
    Dataset out = train;
    out.features = vstack(train.features, synthetic);
    out.labels.insert(out.labels.end(), synthetic.rows(), 1);
    return out;
}

long long synthetic_needed(const ClassRows& c, double target_ratio) {
    const long long want = oversample_target(c.majority.size(), target_ratio);
    const auto have = static_cast<long long>(c.minority.size());
    if (want < have)
        throw ConfigError("oversampling: target_ratio " + std::to_string(target_ratio) +
                          " is below the current minority/majority ratio");
    return want - have;
}

void check_neighbors(std::size_t minority, int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= minority)
        throw FitError("k_neighbors = " + std::to_string(k) + " needs more than " + std::to_string(k) +
                       " minority rows, have " + std::to_string(minority));
}

Matrix interpolate(const Matrix& minority, const std::vector<std::vector<std::size_t>>& nn,
                   std::span<const std::size_t> bases, Rng& rng) {
    Matrix out(bases.size(), minority.cols());
    for (std::size_t s = 0; s < bases.size(); ++s) {
        const std::size_t i = bases[s];
        const std::size_t j = nn[i][uniform_index(rng, nn[i].size())];
        const double u = uniform01(rng);
        auto a = minority.row(i);
        auto b = minority.row(j);
        auto z = out.row(s);
        for (std::size_t c = 0; c < z.size(); ++c) z[c] = a[c] + u * (b[c] - a[c]);
    }
    return out;
}

std::vector<std::vector<std::size_t>> minority_neighbors(const Matrix& minority, int k) {
    std::vector<std::vector<std::size_t>> nn(minority.rows());
    for (std::size_t i = 0; i < minority.rows(); ++i)
        nn[i] = k_nearest(minority, minority.row(i), static_cast<std::size_t>(k), i);
    return nn;
}

}  // namespace

std::string_view to_string(SamplerKind k) {
    for (const auto& i : kinds)
        if (i.kind == k) return i.id;
    return "?";
}

std::string_view display_name(SamplerKind k) {
    for (const auto& i : kinds)
        if (i.kind == k) return i.display;
    return "?";
}

SamplerKind sampler_kind_from_string(std::string_view s) {
    for (const auto& i : kinds)
        if (i.id == s) return i.kind;
    throw ConfigError("unknown sampler kind '" + std::string(s) + "'");
}

std::string SamplerSpec::label() const {
    return name.empty() ? std::string(display_name(kind)) : name;
}

void validate(const SamplerSpec& spec) {
    if (!(spec.target_ratio > 0.0 && spec.target_ratio <= 1.0))
        throw ConfigError("sampler " + spec.label() + ": target_ratio must lie in (0, 1]");
    if (spec.k_neighbors < 1) throw ConfigError("sampler " + spec.label() + ": k_neighbors must be >= 1");
    if (spec.iht_folds < 2) throw ConfigError("sampler " + spec.label() + ": iht_folds must be >= 2");
    if (spec.iht_trees < 1) throw ConfigError("sampler " + spec.label() + ": iht_trees must be >= 1");
}

long long oversample_target(std::size_t majority, double target_ratio) {
    return round_half_away(target_ratio * static_cast<double>(majority));
}

long long undersample_target(std::size_t minority, double target_ratio) {
    return round_half_away(static_cast<double>(minority) / target_ratio);
}

Matrix smote_synthesize(const Matrix& minority, int k_neighbors, long long count, std::uint64_t seed) {
    if (count < 0) throw ConfigError("smote: negative synthetic count");
    if (count == 0) return Matrix(0, minority.cols());
    check_neighbors(minority.rows(), k_neighbors);
    const auto nn = minority_neighbors(minority, k_neighbors);
    Rng rng(derive_seed(seed, {0x5307EULL}));
    std::vector<std::size_t> bases(static_cast<std::size_t>(count));
    for (auto& b : bases) b = static_cast<std::size_t>(uniform_index(rng, minority.rows()));
    return interpolate(minority, nn, bases, rng);
}

std::vector<long long> adasyn_allocation(const Dataset& train, int k_neighbors, double target_ratio) {
    const auto c = split_classes(train);
    check_neighbors(c.minority.size(), k_neighbors);
    const long long total = synthetic_needed(c, target_ratio);

    // Hardness: share of majority rows among each minority point's k nearest
    // neighbours in the full training set.
    std::vector<double> r(c.minority.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < c.minority.size(); ++i) {
        const std::size_t row = c.minority[i];
        const auto nn = k_nearest(train.features, train.features.row(row),
                                  static_cast<std::size_t>(k_neighbors), row);
        std::size_t maj = 0;
        for (auto j : nn) maj += train.labels[j] == 0 ? 1u : 0u;
        r[i] = static_cast<double>(maj) / static_cast<double>(k_neighbors);
        sum += r[i];
    }
    if (sum == 0.0) {
        std::fill(r.begin(), r.end(), 1.0);
        sum = static_cast<double>(r.size());
    }

    // Largest-remainder apportionment so the counts sum to `total` exactly;
    // equal remainders go to the lower index.
    std::vector<long long> alloc(r.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    long long assigned = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double exact = r[i] / sum * static_cast<double>(total);
        alloc[i] = static_cast<long long>(std::floor(exact));
        assigned += alloc[i];
        remainders.emplace_back(exact - static_cast<double>(alloc[i]), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        // Points with zero hardness never receive remainder rows.
        while (r[remainders[k % remainders.size()].second] == 0.0) ++k;
        ++alloc[remainders[k % remainders.size()].second];
    }
    return alloc;
}

Matrix adasyn_synthesize(const Dataset& train, int k_neighbors, double target_ratio, std::uint64_t seed) {
    const auto alloc = adasyn_allocation(train, k_neighbors, target_ratio);
    const auto c = split_classes(train);
    const Matrix minority = take_rows(train.features, c.minority);
    const auto nn = minority_neighbors(minority, k_neighbors);
    std::vector<std::size_t> bases;
    for (std::size_t i = 0; i < alloc.size(); ++i) bases.insert(bases.end(), static_cast<std::size_t>(alloc[i]), i);
    Rng rng(derive_seed(seed, {0xADA5ULL}));
    return interpolate(minority, nn, bases, rng);
}

std::vector<double> out_of_fold_true_class_probability(const Dataset& train, int folds,
                                                       std::uint64_t seed, int n_trees) {
    std::vector<std::size_t> rows(train.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const auto fold_of = stratified_folds(rows, train.labels, folds, derive_seed(seed, {0xF0ULL}));

    ClassifierSpec forest{ClassifierKind::random_forest, {{"n_trees", static_cast<double>(n_trees)}}, 0, {}};
    std::vector<double> prob(train.rows(), 0.0);
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> fit_rows, held_rows;
        for (std::size_t i = 0; i < rows.size(); ++i) (fold_of[i] == f ? held_rows : fit_rows).push_back(i);
        const auto model = imbsel::train(forest, subset(train, fit_rows),
                                         derive_seed(seed, {0x1A7ULL, static_cast<std::uint64_t>(f)}));
        const auto scores = model.predict_scores(take_rows(train.features, held_rows));
        for (std::size_t k = 0; k < held_rows.size(); ++k) {
            const std::size_t i = held_rows[k];
            prob[i] = train.labels[i] == 1 ? scores[k] : 1.0 - scores[k];
        }
    }
    return prob;
}

Dataset iht_undersample(const Dataset& train, double target_ratio, int iht_folds, std::uint64_t seed,
                        int n_trees) {
    const auto c = split_classes(train);
    const long long keep = undersample_target(c.minority.size(), target_ratio);
    if (keep > static_cast<long long>(c.majority.size()))
        throw ConfigError("instance_hardness_threshold: target_ratio " + std::to_string(target_ratio) +
                          " would keep " + std::to_string(keep) + " of " +
                          std::to_string(c.majority.size()) + " majority rows");
    const auto prob = out_of_fold_true_class_probability(train, iht_folds, seed, n_trees);

    // Easiest majority rows first; equal probabilities keep row order.
    auto ranked = c.majority;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return prob[a] > prob[b]; });
    std::vector<std::size_t> kept = c.minority;
    kept.insert(kept.end(), ranked.begin(), ranked.begin() + keep);
    std::sort(kept.begin(), kept.end());
    return subset(train, kept);
}

Dataset resample(const SamplerSpec& spec, const Dataset& train, std::uint64_t seed) {
    validate(spec);
    if (spec.kind == SamplerKind::none) return train;
    const std::uint64_t s = derive_seed(seed, {spec.seed_salt});
    const auto c = split_classes(train);

    switch (spec.kind) {
        case SamplerKind::none: return train;
        case SamplerKind::random_under: {
            const long long keep = undersample_target(c.minority.size(), spec.target_ratio);
            if (!spec.with_replacement && keep > static_cast<long long>(c.majority.size()))
                throw ConfigError("random_under: target_ratio " + std::to_string(spec.target_ratio) +
                                  " would keep more majority rows than exist");
            Rng rng(derive_seed(s, {0x0DE2ULL}));
            std::vector<std::size_t> kept = c.minority;
            if (spec.with_replacement) {
                for (long long k = 0; k < keep; ++k)
                    kept.push_back(c.majority[uniform_index(rng, c.majority.size())]);
            } else {
                auto pool = c.majority;
                shuffle(std::span(pool), rng);
                kept.insert(kept.end(), pool.begin(), pool.begin() + keep);
            }
            std::sort(kept.begin(), kept.end());
            return subset(train, kept);
        }
        case SamplerKind::instance_hardness_threshold:
            return iht_undersample(train, spec.target_ratio, spec.iht_folds, s, spec.iht_trees);
        case SamplerKind::random_over: {
            const long long extra = synthetic_needed(c, spec.target_ratio);
            Rng rng(derive_seed(s, {0x0E2ULL}));
            std::vector<std::size_t> picks(static_cast<std::size_t>(extra));
            for (auto& p : picks) p = c.minority[uniform_index(rng, c.minority.size())];
            return append_minority(train, take_rows(train.features, picks));
        }
        case SamplerKind::smote: {
            const long long extra = synthetic_needed(c, spec.target_ratio);
            const Matrix minority = take_rows(train.features, c.minority);
            return append_minority(train, smote_synthesize(minority, spec.k_neighbors, extra, s));
        }
        case SamplerKind::adasyn:
            return append_minority(train, adasyn_synthesize(train, spec.k_neighbors, spec.target_ratio, s));
    }
    return train;
}

}  // namespace imbsel
