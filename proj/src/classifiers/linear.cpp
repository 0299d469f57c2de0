#include <cmath>
#include <numeric>

#include "imbsel/error.hpp"
#include "imbsel/models.hpp"

namespace imbsel {

namespace {

inline double sign_label(int y) { return y == 1 ? 1.0 : -1.0; }

// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> margins(const LinearWeights& w, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = w.margin(x.row(r));
    return out;
}

}  // namespace

std::vector<double> DummyClassifier::scores(const Matrix& x) const {
    return std::vector<double>(x.rows(), 1.0);
}

// ---------------------------------------------------------------------------

double LogisticRegression::loss_and_gradient(const Matrix& x, std::span<const int> y, double l2,
                                             const LinearWeights& p, std::vector<double>* grad) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (grad) grad->assign(d + 1, 0.0);
    double loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double s = sign_label(y[r]);
        const double z = p.margin(x.row(r));
        loss += softplus(-s * z);
        if (grad) {
            // d/dz log(1 + exp(-s z)) = -s * sigmoid(-s z)
            const double g = -s * sigmoid(-s * z);
            auto row = x.row(r);
            for (std::size_t c = 0; c < d; ++c) (*grad)[c] += g * row[c];
            (*grad)[d] += g;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    double wsq = 0.0;
    for (double w : p.w) wsq += w * w;
    loss += 0.5 * l2 * wsq;
    if (grad) {
        for (std::size_t c = 0; c < d; ++c) (*grad)[c] = (*grad)[c] * inv_n + l2 * p.w[c];
        (*grad)[d] *= inv_n;
    }
    return loss;
}

void LogisticRegression::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    const std::size_t d = x.cols();
    weights_ = LinearWeights{std::vector<double>(d, 0.0), 0.0};
    std::vector<double> grad;
    double loss = loss_and_gradient(x, y, l2_, weights_, &grad);
    double step = 1.0;
    epochs_ = 0;
    for (int epoch = 0; epoch < max_epochs_; ++epoch) {
        epochs_ = epoch + 1;
        double gsq = 0.0;
        for (double g : grad) gsq += g * g;
        if (gsq == 0.0) break;

        // Armijo backtracking, starting from twice the last accepted step.
        step = std::min(step * 2.0, 1e6);
        LinearWeights trial;
        double trial_loss = loss;
        bool accepted = false;
        for (int shrink = 0; shrink < 60; ++shrink) {
            trial.w.resize(d);
            for (std::size_t c = 0; c < d; ++c) trial.w[c] = weights_.w[c] - step * grad[c];
            trial.bias = weights_.bias - step * grad[d];
            trial_loss = loss_and_gradient(x, y, l2_, trial, nullptr);
            if (trial_loss <= loss - 0.5 * step * gsq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double delta = loss - trial_loss;
        weights_ = std::move(trial);
        loss = loss_and_gradient(x, y, l2_, weights_, &grad);
        if (delta < tol_) break;
    }
}

std::vector<double> LogisticRegression::scores(const Matrix& x) const {
    auto m = margins(weights_, x);
    for (auto& v : m) v = sigmoid(v);
    return m;
}

// ---------------------------------------------------------------------------

void RidgeClassifier::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    notes_.clear();
    // Centre so the intercept is unpenalised.
    std::vector<double> xm(d, 0.0);
    double ym = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        auto row = x.row(r);
        for (std::size_t c = 0; c < d; ++c) xm[c] += row[c];
        ym += sign_label(y[r]);
    }
    for (auto& v : xm) v /= static_cast<double>(n);
    ym /= static_cast<double>(n);

    Matrix gram(d, d);
    std::vector<double> rhs(d, 0.0);
    std::vector<double> xc(d);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = x.row(r);
        for (std::size_t c = 0; c < d; ++c) xc[c] = row[c] - xm[c];
        const double t = sign_label(y[r]) - ym;
        for (std::size_t i = 0; i < d; ++i) {
            rhs[i] += xc[i] * t;
            for (std::size_t j = i; j < d; ++j) gram(i, j) += xc[i] * xc[j];
        }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) gram(j, i) = gram(i, j);
        gram(i, i) += lambda_;
        trace += gram(i, i);
    }

    Matrix factor = gram;
    double jitter = 0.0;
    for (int attempt = 0; !cholesky(factor); ++attempt) {
        if (attempt >= 12) throw FitError("ridge: system not positive definite");
        jitter = jitter == 0.0 ? std::max(1e-12, 1e-10 * trace / static_cast<double>(std::max<std::size_t>(d, 1)))
                               : jitter * 10.0;
        factor = gram;
        for (std::size_t i = 0; i < d; ++i) factor(i, i) += jitter;
    }
    if (jitter > 0.0) notes_.push_back("ridge: diagonal jitter " + std::to_string(jitter));
    weights_.w = d ? cholesky_solve(factor, rhs) : std::vector<double>{};
    weights_.bias = ym - dot(xm, weights_.w);
}

std::vector<double> RidgeClassifier::scores(const Matrix& x) const { return margins(weights_, x); }

// ---------------------------------------------------------------------------

void OnlineLinear::fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    weights_ = LinearWeights{std::vector<double>(d, 0.0), 0.0};
    auto& w = weights_.w;
    double& b = weights_.bias;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 0;
    for (int epoch = 0; epoch < epochs_; ++epoch) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(epoch)}));
        shuffle(std::span(order), rng);
        std::size_t mistakes = 0;
        for (std::size_t r : order) {
            auto row = x.row(r);
            const double s = sign_label(y[r]);
            const double m = weights_.margin(row);
            switch (rule_) {
                case Rule::perceptron:
                    if (s * m <= 0.0) {
                        ++mistakes;
                        for (std::size_t c = 0; c < d; ++c) w[c] += s * row[c];
                        b += s;
                    }
                    break;
                case Rule::sgd_hinge: {
                    // Inverse-scaling step from eta0 = 1 on the L2-regularised hinge.
                    const double eta = 1.0 / (1.0 + alpha_ * static_cast<double>(t++));
                    const double shrink = 1.0 - eta * alpha_;
                    for (auto& v : w) v *= shrink;
                    if (s * m < 1.0) {
                        ++mistakes;
                        for (std::size_t c = 0; c < d; ++c) w[c] += eta * s * row[c];
                        b += eta * s;
                    }
                    break;
                }
                case Rule::passive_aggressive: {
                    const double loss = std::max(0.0, 1.0 - s * m);
                    if (loss > 0.0) {
                        ++mistakes;
                        // The bias acts as an extra constant-1 feature.
                        const double norm = dot(row, row) + 1.0;
                        const double tau = std::min(c_, loss / norm);
                        for (std::size_t c = 0; c < d; ++c) w[c] += tau * s * row[c];
                        b += tau * s;
                    }
                    break;
                }
            }
        }
        if (rule_ == Rule::perceptron && mistakes == 0) break;
    }
}

std::vector<double> OnlineLinear::scores(const Matrix& x) const { return margins(weights_, x); }

}  // namespace imbsel
