#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imbsel/data_io.hpp"
#include "imbsel/matrix.hpp"

namespace imbsel {

enum class SamplerKind { none, random_under, instance_hardness_threshold, random_over, smote, adasyn };

std::string_view to_string(SamplerKind k);
SamplerKind sampler_kind_from_string(std::string_view s);

/// Short report label (UB, U:R, U:I, O:R, O:S, O:A).
std::string_view display_name(SamplerKind k);

struct SamplerSpec {
    SamplerKind kind = SamplerKind::none;
    /// Desired minority/majority count ratio after resampling.
    double target_ratio = 1.0;
    int k_neighbors = 5;
    bool with_replacement = false;
    int iht_folds = 5;
    /// Trees in the forest IHT uses to score instance hardness.
    int iht_trees = 50;
    std::uint64_t seed_salt = 0;
    std::string name;

    std::string label() const;
};

/// Spec-only checks (ranges), independent of any dataset.
void validate(const SamplerSpec& spec);

/// Rebalances a training set. Undersamplers only drop majority rows and
/// oversamplers only add minority rows; kind `none` returns the input.
Dataset resample(const SamplerSpec& spec, const Dataset& train, std::uint64_t seed);

/// Interpolates `count` synthetic rows between minority points and their
/// k nearest minority neighbours.
Matrix smote_synthesize(const Matrix& minority, int k_neighbors, long long count, std::uint64_t seed);

/// Hardness-weighted SMOTE: points with more majority neighbours seed more synthetics.
Matrix adasyn_synthesize(const Dataset& train, int k_neighbors, double target_ratio, std::uint64_t seed);

/// Per-minority-row synthetic counts ADASYN would allocate (sums to the total).
std::vector<long long> adasyn_allocation(const Dataset& train, int k_neighbors, double target_ratio);

/// Keeps every minority row and the majority rows whose out-of-fold true-class
/// probability ranks highest.
Dataset iht_undersample(const Dataset& train, double target_ratio, int iht_folds, std::uint64_t seed,
                        int n_trees = 50);

/// Out-of-fold probability of each row's own class (used by IHT ranking).
std::vector<double> out_of_fold_true_class_probability(const Dataset& train, int folds,
                                                       std::uint64_t seed, int n_trees);

/// Number of rows the minority should have after oversampling.
long long oversample_target(std::size_t majority, double target_ratio);
/// Number of majority rows kept by undersampling.
long long undersample_target(std::size_t minority, double target_ratio);

}  // namespace imbsel
