#include "imbsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "imbsel/error.hpp"

namespace imbsel {

std::vector<std::string> degenerate_names(unsigned flags) {
    static const std::pair<unsigned, const char*> names[] = {
        {degenerate_precision, "precision_0/0"}, {degenerate_recall, "recall_0/0"},
        {degenerate_tnr, "tnr_0/0"},             {degenerate_f1, "f1_0/0"},
        {degenerate_kappa, "kappa_pe=1"},        {degenerate_matthews, "matthews_0/0"},
    };
    std::vector<std::string> out;
    for (auto [bit, name] : names)
        if (flags & bit) out.emplace_back(name);
    return out;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion: length mismatch");
    if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1))
            throw std::invalid_argument("confusion: labels must be 0 or 1");
        if (t == 1)
            (p == 1 ? c.tp : c.fn)++;
        else
            (p == 1 ? c.fp : c.tn)++;
    }
    return c;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, unsigned flag, unsigned& flags) {
    if (den == 0) {
        flags |= flag;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

void require_total(const ConfusionMatrix& c) {
    if (c.total() == 0) throw std::invalid_argument("metrics: empty confusion matrix");
}

}  // namespace

BasicRates basic_rates(const ConfusionMatrix& c) {
    require_total(c);
    BasicRates r;
    const auto total = static_cast<double>(c.total());
    r.accuracy = static_cast<double>(c.tp + c.tn) / total;
    r.hamming_loss = static_cast<double>(c.fp + c.fn) / total;
    r.precision = ratio(c.tp, c.tp + c.fp, degenerate_precision, r.flags);
    r.recall = ratio(c.tp, c.tp + c.fn, degenerate_recall, r.flags);
    r.tnr = ratio(c.tn, c.tn + c.fp, degenerate_tnr, r.flags);
    unsigned ignored = 0;
    r.fpr = ratio(c.fp, c.tn + c.fp, degenerate_tnr, ignored);
    return r;
}

Scored f1(const ConfusionMatrix& c) {
    require_total(c);
    // 2tp / (2tp + fp + fn) equals the harmonic mean of precision and recall.
    const std::uint64_t den = 2 * c.tp + c.fp + c.fn;
    Scored s;
    s.value = ratio(2 * c.tp, den, degenerate_f1, s.flags);
    return s;
}

double gmean(const ConfusionMatrix& c) {
    const auto r = basic_rates(c);
    return std::sqrt(r.recall * r.tnr);
}

Scored cohen_kappa(const ConfusionMatrix& c) {
    require_total(c);
    const auto n = static_cast<double>(c.total());
    const double po = static_cast<double>(c.tp + c.tn) / n;
    const double pred_pos = static_cast<double>(c.tp + c.fp);
    const double pred_neg = static_cast<double>(c.fn + c.tn);
    const double true_pos = static_cast<double>(c.tp + c.fn);
    const double true_neg = static_cast<double>(c.fp + c.tn);
    const double pe = (pred_pos * true_pos + pred_neg * true_neg) / (n * n);
    Scored s;
    if (pe >= 1.0) {
        s.flags |= degenerate_kappa;
        return s;
    }
    s.value = (po - pe) / (1.0 - pe);
    return s;
}

Scored matthews(const ConfusionMatrix& c) {
    require_total(c);
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double tn = static_cast<double>(c.tn);
    const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    Scored s;
    if (den == 0.0) {
        s.flags |= degenerate_matthews;
        return s;
    }
    s.value = (tp * tn - fp * fn) / std::sqrt(den);
    return s;
}

double auroc_point(const ConfusionMatrix& c) {
    const auto r = basic_rates(c);
    return (r.recall + r.tnr) / 2.0;
}

double auroc_curve(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) throw std::invalid_argument("auroc_curve: length mismatch");
    const std::size_t n = y_true.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney U with mid-ranks for ties. Ranks are kept doubled so every
    // quantity stays an exact integer until the final division.
    double pos = 0, neg = 0, doubled_rank_sum = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double doubled_mid = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (y_true[order[k]] == 1) doubled_rank_sum += doubled_mid;
        i = j;
    }
    for (int y : y_true) (y == 1 ? pos : neg) += 1;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("auroc_curve: y_true must contain both classes");
    const double doubled_u = doubled_rank_sum - pos * (pos + 1);
    return doubled_u / (2.0 * pos * neg);
}

MetricRecord metrics_from_counts(const ConfusionMatrix& c) {
    MetricRecord m;
    m.counts = c;
    const auto r = basic_rates(c);
    m.accuracy = r.accuracy;
    m.precision = r.precision;
    m.recall = r.recall;
    m.hamming_loss = r.hamming_loss;
    m.flags |= r.flags;
    const auto f = f1(c);
    m.f1 = f.value;
    m.flags |= f.flags;
    m.gmean = std::sqrt(r.recall * r.tnr);
    m.auroc_point = (r.recall + r.tnr) / 2.0;
    const auto k = cohen_kappa(c);
    m.cohen_kappa = k.value;
    m.flags |= k.flags;
    const auto mc = matthews(c);
    m.matthews = mc.value;
    m.flags |= mc.flags;
    return m;
}

MetricRecord evaluate_predictions(std::span<const int> y_true, std::span<const int> y_pred,
                                  std::span<const double> scores) {
    auto m = metrics_from_counts(confusion(y_true, y_pred));
    m.auroc_curve = auroc_curve(y_true, scores);
    return m;
}

const std::vector<std::string>& metric_keys() {
    static const std::vector<std::string> keys = {
        "accuracy",    "precision",   "recall",      "f1",       "gmean",
        "auroc_curve", "auroc_point", "cohen_kappa", "matthews", "hamming_loss",
    };
    return keys;
}

bool is_metric_key(std::string_view key) {
    const auto& k = metric_keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

double metric_value(const MetricRecord& m, std::string_view key) {
    if (key == "accuracy") return m.accuracy;
    if (key == "precision") return m.precision;
    if (key == "recall") return m.recall;
    if (key == "f1") return m.f1;
    if (key == "gmean") return m.gmean;
    if (key == "auroc_curve") return m.auroc_curve;
    if (key == "auroc_point") return m.auroc_point;
    if (key == "cohen_kappa") return m.cohen_kappa;
    if (key == "matthews") return m.matthews;
    if (key == "hamming_loss") return m.hamming_loss;
    throw ConfigError("unknown metric key '" + std::string(key) + "'");
}

double metric_score(const MetricRecord& m, std::string_view key) {
    const double v = metric_value(m, key);
    return key == "hamming_loss" ? -v : v;
}

}  // namespace imbsel
