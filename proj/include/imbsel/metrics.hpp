#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imbsel {

/// Binary confusion counts; positive means label 1.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Bit set of 0/0 conventions applied while scoring.
enum Degenerate : unsigned {
    degenerate_none = 0,
    degenerate_precision = 1u << 0,
    degenerate_recall = 1u << 1,
    degenerate_tnr = 1u << 2,
    degenerate_f1 = 1u << 3,
    degenerate_kappa = 1u << 4,
    degenerate_matthews = 1u << 5,
};

std::vector<std::string> degenerate_names(unsigned flags);

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct BasicRates {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double tnr = 0;
    double fpr = 0;
    double hamming_loss = 0;
    unsigned flags = degenerate_none;
};

BasicRates basic_rates(const ConfusionMatrix& c);

struct Scored {
    double value = 0;
    unsigned flags = degenerate_none;
};

Scored f1(const ConfusionMatrix& c);
double gmean(const ConfusionMatrix& c);
Scored cohen_kappa(const ConfusionMatrix& c);
Scored matthews(const ConfusionMatrix& c);
double auroc_point(const ConfusionMatrix& c);

/// Rank-based area under the ROC curve; tied scores count one half.
double auroc_curve(std::span<const int> y_true, std::span<const double> scores);

struct MetricRecord {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double gmean = 0;
    double auroc_curve = 0;
    double auroc_point = 0;
    double cohen_kappa = 0;
    double matthews = 0;
    double hamming_loss = 0;
    double train_time_seconds = 0;
    ConfusionMatrix counts;
    unsigned flags = degenerate_none;
};

/// Every count-derived metric; auroc_curve needs scores and is left at 0.
MetricRecord metrics_from_counts(const ConfusionMatrix& c);

/// Full record including the threshold-swept AUROC.
MetricRecord evaluate_predictions(std::span<const int> y_true, std::span<const int> y_pred,
                                  std::span<const double> scores);

/// Names accepted as a selection metric (fields of MetricRecord).
const std::vector<std::string>& metric_keys();
bool is_metric_key(std::string_view key);

/// Value of a named metric, oriented so that larger is better
/// (hamming_loss is returned negated).
double metric_score(const MetricRecord& m, std::string_view key);

/// Raw value of a named metric.
double metric_value(const MetricRecord& m, std::string_view key);

}  // namespace imbsel
