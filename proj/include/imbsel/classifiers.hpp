#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imbsel/data_io.hpp"
#include "imbsel/matrix.hpp"

namespace imbsel {

enum class ClassifierKind {
    dummy,
    logistic_regression,
    gaussian_nb,
    decision_tree,
    random_forest,
    knn,
    perceptron,
    ridge,
    sgd_hinge,
    passive_aggressive,
    adaboost_discrete,
    adaboost_real,
    quadratic_da,
};

std::string_view to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(std::string_view s);
const std::vector<ClassifierKind>& all_classifier_kinds();

/// Short label used in reports (RF, KNN, Ada-Disc, ...).
std::string_view display_name(ClassifierKind k);

/// True for kinds whose scores are probabilities in [0,1] (threshold 0.5);
/// the rest emit signed margins (threshold 0).
bool supports_probability(ClassifierKind k);

/// Declarative configuration for one classifier cell.
///
/// Recognised hyperparameters (defaults in brackets):
///   logistic_regression: l2 [1e-4], max_epochs [500], tol [1e-8]
///   decision_tree:       max_depth [0 = unbounded], min_samples_split [2]
///   random_forest:       n_trees [100], max_depth [0], min_samples_split [2],
///                        max_features [0 = floor(sqrt(p))]
///   knn:                 k [5]
///   perceptron:          epochs [50]
///   sgd_hinge:           epochs [50], alpha [1e-4]
///   passive_aggressive:  epochs [50], c [1.0]
///   ridge:               lambda [1.0]
///   gaussian_nb:         var_smoothing [1e-9]
///   quadratic_da:        reg [1e-6]
///   adaboost_*:          rounds [50]
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::dummy;
    std::map<std::string, double> params;
    std::uint64_t seed_salt = 0;
    /// Report label; defaults to display_name(kind).
    std::string name;

    double param(const std::string& key, double fallback) const;
    std::string label() const;
};

/// Throws ConfigError for unknown keys or out-of-range values.
void validate(const ClassifierSpec& spec);

/// Learned parameters of one classifier kind.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) = 0;
    /// Probability of class 1, or a signed margin for margin kinds.
    virtual std::vector<double> scores(const Matrix& x) const = 0;
    /// Free-form notes about fallbacks taken during fit.
    virtual std::vector<std::string> notes() const { return {}; }
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

/// An immutable fitted model plus its bookkeeping.
class TrainedModel {
public:
    TrainedModel(ClassifierSpec spec, std::shared_ptr<const Classifier> impl, std::size_t width,
                 double train_time_seconds);

    const ClassifierSpec& spec() const noexcept { return spec_; }
    std::size_t feature_width() const noexcept { return width_; }
    bool supports_probability() const noexcept;
    double train_time_seconds() const noexcept { return train_time_; }
    std::vector<std::string> notes() const { return impl_->notes(); }
    double threshold() const noexcept { return supports_probability() ? 0.5 : 0.0; }

    std::vector<double> predict_scores(const Matrix& x) const;
    std::vector<int> predict_labels(const Matrix& x) const;

private:
    void check_width(const Matrix& x) const;

    ClassifierSpec spec_;
    std::shared_ptr<const Classifier> impl_;
    std::size_t width_;
    double train_time_;
};

/// Fits `spec` on `data`. Deterministic for fixed (spec, data, seed).
TrainedModel train(const ClassifierSpec& spec, const Dataset& data, std::uint64_t seed);

/// Score-to-label rule shared by every kind: strictly above the threshold is positive.
std::vector<int> threshold_scores(std::span<const double> scores, double threshold);

}  // namespace imbsel
