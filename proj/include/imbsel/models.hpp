#pragma once

// Concrete classifiers behind make_classifier(). Exposed so tests and the
// samplers can reach model internals directly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imbsel/classifiers.hpp"
#include "imbsel/matrix.hpp"
#include "imbsel/rng.hpp"

namespace imbsel {

class DummyClassifier final : public Classifier {
public:
    void fit(const Matrix&, std::span<const int>, std::uint64_t) override {}
    std::vector<double> scores(const Matrix& x) const override;
};

// ---------------------------------------------------------------------------
// Linear models

struct LinearWeights {
    std::vector<double> w;
    double bias = 0.0;

    double margin(std::span<const double> x) const noexcept { return dot(w, x) + bias; }
};

class LogisticRegression final : public Classifier {
public:
    LogisticRegression(double l2, int max_epochs, double tol)
        : l2_(l2), max_epochs_(max_epochs), tol_(tol) {}

    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;

    const LinearWeights& weights() const noexcept { return weights_; }
    int epochs_run() const noexcept { return epochs_; }

    /// Mean log-loss plus (l2/2)|w|^2; `grad` receives d/dw followed by d/db.
    static double loss_and_gradient(const Matrix& x, std::span<const int> y, double l2,
                                    const LinearWeights& p, std::vector<double>* grad);

private:
    double l2_;
    int max_epochs_;
    double tol_;
    int epochs_ = 0;
    LinearWeights weights_;
};

class RidgeClassifier final : public Classifier {
public:
    explicit RidgeClassifier(double lambda) : lambda_(lambda) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;
    std::vector<std::string> notes() const override { return notes_; }
    const LinearWeights& weights() const noexcept { return weights_; }

private:
    double lambda_;
    LinearWeights weights_;
    std::vector<std::string> notes_;
};

/// Perceptron, hinge-loss SGD and passive-aggressive share the online loop.
class OnlineLinear final : public Classifier {
public:
    enum class Rule { perceptron, sgd_hinge, passive_aggressive };
    OnlineLinear(Rule rule, int epochs, double alpha, double c)
        : rule_(rule), epochs_(epochs), alpha_(alpha), c_(c) {}

    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;
    const LinearWeights& weights() const noexcept { return weights_; }

private:
    Rule rule_;
    int epochs_;
    double alpha_;
    double c_;
    LinearWeights weights_;
};

// ---------------------------------------------------------------------------
// Trees

struct TreeParams {
    int max_depth = 0;          // 0 = unbounded
    int min_samples_split = 2;
    int max_features = 0;       // 0 = every feature
};

/// CART with Gini impurity and midpoint thresholds.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double positive_fraction = 0.0;
    };

    /// `columns` is column-major feature data; `samples` lists training rows,
    /// repeated rows act as weights. `rng` drives feature subsampling and may
    /// be null when max_features covers every feature.
    void fit(const std::vector<std::vector<double>>& columns, std::span<const int> y,
             std::vector<std::size_t> samples, const TreeParams& params, Rng* rng);

    double predict_proba(std::span<const double> row) const;
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    int depth() const noexcept { return depth_; }

private:
    std::vector<Node> nodes_;
    int depth_ = 0;
};

class DecisionTreeClassifier final : public Classifier {
public:
    explicit DecisionTreeClassifier(TreeParams p) : params_(p) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;
    const DecisionTree& tree() const noexcept { return tree_; }

private:
    TreeParams params_;
    DecisionTree tree_;
};

/// Bagged CART trees with sqrt(p) features per split. The score is the
/// fraction of trees voting positive.
class RandomForest final : public Classifier {
public:
    RandomForest(int n_trees, TreeParams p) : n_trees_(n_trees), params_(p) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;

    /// Per-tree 0/1 votes for one row.
    std::vector<int> tree_votes(std::span<const double> row) const;
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

private:
    int n_trees_;
    TreeParams params_;
    std::vector<DecisionTree> trees_;
};

// ---------------------------------------------------------------------------
// Instance-based and generative

class KnnClassifier final : public Classifier {
public:
    explicit KnnClassifier(int k) : k_(k) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;

private:
    int k_;
    Matrix x_;
    std::vector<int> y_;
};

class GaussianNb final : public Classifier {
public:
    explicit GaussianNb(double var_smoothing) : var_smoothing_(var_smoothing) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;

private:
    double var_smoothing_;
    std::vector<double> mean_[2];
    std::vector<double> var_[2];
    double log_prior_[2] = {0, 0};
};

class QuadraticDa final : public Classifier {
public:
    explicit QuadraticDa(double reg) : reg_(reg) {}
    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;
    std::vector<std::string> notes() const override { return notes_; }

private:
    double reg_;
    std::vector<double> mean_[2];
    Matrix chol_[2];
    double log_det_[2] = {0, 0};
    double log_prior_[2] = {0, 0};
    std::vector<std::string> notes_;
};

// ---------------------------------------------------------------------------
// Boosting

struct Stump {
    int feature = -1;  // -1: constant prediction, `right` used everywhere
    double threshold = 0.0;
    double left = 0.0;   // output when x[feature] <= threshold
    double right = 0.0;

    double eval(std::span<const double> row) const noexcept {
        return feature < 0 || row[static_cast<std::size_t>(feature)] > threshold ? right : left;
    }
};

class AdaBoost final : public Classifier {
public:
    enum class Variant { discrete, real };
    AdaBoost(Variant v, int rounds) : variant_(v), rounds_(rounds) {}

    void fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) override;
    std::vector<double> scores(const Matrix& x) const override;

    /// Discrete: stumps output ±1 and alphas carry the vote weight.
    /// Real: stumps output half log-odds directly and alphas are 1.
    const std::vector<Stump>& stumps() const noexcept { return stumps_; }
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    /// Weighted training error of each accepted discrete learner.
    const std::vector<double>& round_errors() const noexcept { return errors_; }

    /// Assemble a model from explicit parts.
    static AdaBoost from_parts(Variant v, std::vector<Stump> stumps, std::vector<double> alphas);

private:
    Variant variant_;
    int rounds_;
    std::vector<Stump> stumps_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
};

}  // namespace imbsel
