#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "imbsel/classifiers.hpp"
#include "imbsel/error.hpp"
#include "imbsel/models.hpp"

namespace imbsel {

namespace {

struct KindInfo {
    ClassifierKind kind;
    std::string_view id;
    std::string_view display;
    bool probability;
};

constexpr KindInfo kinds[] = {
    {ClassifierKind::dummy, "dummy", "Dummy", true},
    {ClassifierKind::logistic_regression, "logistic_regression", "LR", true},
    {ClassifierKind::gaussian_nb, "gaussian_nb", "GNB", true},
    {ClassifierKind::decision_tree, "decision_tree", "DT", true},
    {ClassifierKind::random_forest, "random_forest", "RF", true},
    {ClassifierKind::knn, "knn", "KNN", true},
    {ClassifierKind::perceptron, "perceptron", "Perceptron", false},
    {ClassifierKind::ridge, "ridge", "Ridge", false},
    {ClassifierKind::sgd_hinge, "sgd_hinge", "SGD", false},
    {ClassifierKind::passive_aggressive, "passive_aggressive", "PAClassifier", false},
    {ClassifierKind::adaboost_discrete, "adaboost_discrete", "Ada-Disc", true},
    {ClassifierKind::adaboost_real, "adaboost_real", "Ada-Real", true},
    {ClassifierKind::quadratic_da, "quadratic_da", "QuadraticDA", true},
};

const KindInfo& info(ClassifierKind k) {
    for (const auto& i : kinds)
        if (i.kind == k) return i;
    throw ConfigError("unknown classifier kind");
}

struct ParamRule {
    std::string_view key;
    double min;
    bool integral;
};

std::vector<ParamRule> rules_for(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::dummy: return {};
        case ClassifierKind::logistic_regression:
            return {{"l2", 0, false}, {"max_epochs", 1, true}, {"tol", 0, false}};
        case ClassifierKind::decision_tree:
            return {{"max_depth", 0, true}, {"min_samples_split", 2, true}};
        case ClassifierKind::random_forest:
            return {{"n_trees", 1, true},
                    {"max_depth", 0, true},
                    {"min_samples_split", 2, true},
                    {"max_features", 0, true}};
        case ClassifierKind::knn: return {{"k", 1, true}};
        case ClassifierKind::perceptron: return {{"epochs", 1, true}};
        case ClassifierKind::sgd_hinge: return {{"epochs", 1, true}, {"alpha", 1e-300, false}};
        case ClassifierKind::passive_aggressive: return {{"epochs", 1, true}, {"c", 1e-300, false}};
        case ClassifierKind::ridge: return {{"lambda", 0, false}};
        case ClassifierKind::gaussian_nb: return {{"var_smoothing", 0, false}};
        case ClassifierKind::quadratic_da: return {{"reg", 0, false}};
        case ClassifierKind::adaboost_discrete:
        case ClassifierKind::adaboost_real: return {{"rounds", 1, true}};
    }
    return {};
}

}  // namespace

std::string_view to_string(ClassifierKind k) { return info(k).id; }
std::string_view display_name(ClassifierKind k) { return info(k).display; }
bool supports_probability(ClassifierKind k) { return info(k).probability; }

ClassifierKind classifier_kind_from_string(std::string_view s) {
    for (const auto& i : kinds)
        if (i.id == s) return i.kind;
    throw ConfigError("unknown classifier kind '" + std::string(s) + "'");
}

const std::vector<ClassifierKind>& all_classifier_kinds() {
    static const std::vector<ClassifierKind> all = [] {
        std::vector<ClassifierKind> v;
        for (const auto& i : kinds) v.push_back(i.kind);
        return v;
    }();
    return all;
}

double ClassifierSpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string ClassifierSpec::label() const {
    return name.empty() ? std::string(display_name(kind)) : name;
}

void validate(const ClassifierSpec& spec) {
    const auto rules = rules_for(spec.kind);
    for (const auto& [key, value] : spec.params) {
        auto it = std::find_if(rules.begin(), rules.end(),
                               [&](const ParamRule& r) { return r.key == key; });
        if (it == rules.end())
            throw ConfigError(std::string(to_string(spec.kind)) + ": unknown hyperparameter '" +
                              key + "'");
        if (!std::isfinite(value) || value < it->min)
            throw ConfigError(std::string(to_string(spec.kind)) + ": " + key + " = " +
                              std::to_string(value) + " below minimum " +
                              std::to_string(it->min));
        if (it->integral && value != std::floor(value))
            throw ConfigError(std::string(to_string(spec.kind)) + ": " + key +
                              " must be an integer");
    }
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
    validate(spec);
    auto ip = [&](const char* key, double def) { return static_cast<int>(spec.param(key, def)); };
    auto tree = [&] {
        TreeParams p;
        p.max_depth = ip("max_depth", 0);
        p.min_samples_split = ip("min_samples_split", 2);
        p.max_features = ip("max_features", 0);
        return p;
    };
    switch (spec.kind) {
        case ClassifierKind::dummy: return std::make_unique<DummyClassifier>();
        case ClassifierKind::logistic_regression:
            return std::make_unique<LogisticRegression>(spec.param("l2", 1e-4), ip("max_epochs", 500),
                                                        spec.param("tol", 1e-8));
        case ClassifierKind::gaussian_nb:
            return std::make_unique<GaussianNb>(spec.param("var_smoothing", 1e-9));
        case ClassifierKind::decision_tree: return std::make_unique<DecisionTreeClassifier>(tree());
        case ClassifierKind::random_forest:
            return std::make_unique<RandomForest>(ip("n_trees", 100), tree());
        case ClassifierKind::knn: return std::make_unique<KnnClassifier>(ip("k", 5));
        case ClassifierKind::perceptron:
            return std::make_unique<OnlineLinear>(OnlineLinear::Rule::perceptron, ip("epochs", 50), 0.0,
                                                  0.0);
        case ClassifierKind::ridge: return std::make_unique<RidgeClassifier>(spec.param("lambda", 1.0));
        case ClassifierKind::sgd_hinge:
            return std::make_unique<OnlineLinear>(OnlineLinear::Rule::sgd_hinge, ip("epochs", 50),
                                                  spec.param("alpha", 1e-4), 0.0);
        case ClassifierKind::passive_aggressive:
            return std::make_unique<OnlineLinear>(OnlineLinear::Rule::passive_aggressive,
                                                  ip("epochs", 50), 0.0, spec.param("c", 1.0));
        case ClassifierKind::adaboost_discrete:
            return std::make_unique<AdaBoost>(AdaBoost::Variant::discrete, ip("rounds", 50));
        case ClassifierKind::adaboost_real:
            return std::make_unique<AdaBoost>(AdaBoost::Variant::real, ip("rounds", 50));
        case ClassifierKind::quadratic_da: return std::make_unique<QuadraticDa>(spec.param("reg", 1e-6));
    }
    throw ConfigError("unknown classifier kind");
}

TrainedModel::TrainedModel(ClassifierSpec spec, std::shared_ptr<const Classifier> impl,
                           std::size_t width, double train_time_seconds)
    : spec_(std::move(spec)), impl_(std::move(impl)), width_(width), train_time_(train_time_seconds) {}

bool TrainedModel::supports_probability() const noexcept {
    return imbsel::supports_probability(spec_.kind);
}

void TrainedModel::check_width(const Matrix& x) const {
    if (x.cols() != width_ && x.rows() > 0)
        throw DataError(DataError::Kind::shape_mismatch,
                        spec_.label() + ": input width " + std::to_string(x.cols()) +
                            " != trained width " + std::to_string(width_));
}

std::vector<double> TrainedModel::predict_scores(const Matrix& x) const {
    check_width(x);
    return impl_->scores(x);
}

std::vector<int> TrainedModel::predict_labels(const Matrix& x) const {
    return threshold_scores(predict_scores(x), threshold());
}

std::vector<int> threshold_scores(std::span<const double> scores, double threshold) {
    std::vector<int> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > threshold ? 1 : 0;
    return out;
}

TrainedModel train(const ClassifierSpec& spec, const Dataset& data, std::uint64_t seed) {
    if (data.rows() == 0) throw FitError(spec.label() + ": empty training set");
    if (spec.kind != ClassifierKind::dummy) {
        const auto pos = data.positives();
        if (pos == 0 || pos == data.rows())
            throw FitError(spec.label() + ": training data must contain both classes");
    }
    for (double v : data.features.data())
        if (!std::isfinite(v)) throw FitError(spec.label() + ": non-finite feature value");

    auto model = make_classifier(spec);
    const auto start = std::chrono::steady_clock::now();
    model->fit(data.features, data.labels, derive_seed(seed, {spec.seed_salt}));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return TrainedModel(spec, std::shared_ptr<const Classifier>(std::move(model)), data.width(),
                        elapsed.count());
}

}  // namespace imbsel
