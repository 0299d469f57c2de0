#include <algorithm>
#include <cmath>
#include <limits>

#include "imbsel/error.hpp"
#include "imbsel/models.hpp"
#include "imbsel/neighbors.hpp"

namespace imbsel {

namespace {

inline double logistic_of_difference(double log_pos, double log_neg) {
    const double d = log_pos - log_neg;
    if (d >= 0) return 1.0 / (1.0 + std::exp(-d));
    const double e = std::exp(d);
    return e / (1.0 + e);
}

}  // namespace

void KnnClassifier::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    if (static_cast<std::size_t>(k_) > x.rows())
        throw FitError("knn: k = " + std::to_string(k_) + " exceeds training rows");
    x_ = x;
    y_.assign(y.begin(), y.end());
}

std::vector<double> KnnClassifier::scores(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto nn = k_nearest(x_, x.row(r), static_cast<std::size_t>(k_));
        std::size_t yes = 0;
        for (auto i : nn) yes += static_cast<std::size_t>(y_[i]);
        out[r] = static_cast<double>(yes) / static_cast<double>(nn.size());
    }
    return out;
}

// ---------------------------------------------------------------------------

void GaussianNb::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    const std::size_t d = x.cols();
    double count[2] = {0, 0};
    for (int c = 0; c < 2; ++c) {
        mean_[c].assign(d, 0.0);
        var_[c].assign(d, 0.0);
    }
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const int c = y[r];
        count[c] += 1;
        auto row = x.row(r);
        for (std::size_t j = 0; j < d; ++j) mean_[c][j] += row[j];
    }
    for (int c = 0; c < 2; ++c)
        for (auto& m : mean_[c]) m /= count[c];
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const int c = y[r];
        auto row = x.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            const double t = row[j] - mean_[c][j];
            var_[c][j] += t * t;
        }
    }

    // Variance floor: var_smoothing times the largest overall feature variance.
    double max_var = 0.0;
    const double n = count[0] + count[1];
    for (std::size_t j = 0; j < d; ++j) {
        const double mu = (mean_[0][j] * count[0] + mean_[1][j] * count[1]) / n;
        double v = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double t = x(r, j) - mu;
            v += t * t;
        }
        max_var = std::max(max_var, v / n);
    }
    double eps = var_smoothing_ * max_var;
    if (!(eps > 0.0)) eps = std::numeric_limits<double>::min();
    for (int c = 0; c < 2; ++c) {
        for (auto& v : var_[c]) v = v / count[c] + eps;
        log_prior_[c] = std::log(count[c] / n);
    }
}

std::vector<double> GaussianNb::scores(const Matrix& x) const {
    constexpr double log_2pi = 1.8378770664093453;
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        double ll[2];
        for (int c = 0; c < 2; ++c) {
            double s = log_prior_[c];
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double t = row[j] - mean_[c][j];
                s -= 0.5 * (log_2pi + std::log(var_[c][j]) + t * t / var_[c][j]);
            }
            ll[c] = s;
        }
        out[r] = logistic_of_difference(ll[1], ll[0]);
    }
    return out;
}

// ---------------------------------------------------------------------------

void QuadraticDa::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    const std::size_t d = x.cols();
    notes_.clear();
    double count[2] = {0, 0};
    for (int c = 0; c < 2; ++c) mean_[c].assign(d, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        count[y[r]] += 1;
        auto row = x.row(r);
        for (std::size_t j = 0; j < d; ++j) mean_[y[r]][j] += row[j];
    }
    for (int c = 0; c < 2; ++c)
        for (auto& m : mean_[c]) m /= count[c];

    Matrix cov[2] = {Matrix(d, d), Matrix(d, d)};
    std::vector<double> t(d);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const int c = y[r];
        auto row = x.row(r);
        for (std::size_t j = 0; j < d; ++j) t[j] = row[j] - mean_[c][j];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) cov[c](i, j) += t[i] * t[j];
    }

    const double n = count[0] + count[1];
    for (int c = 0; c < 2; ++c) {
        log_prior_[c] = std::log(count[c] / n);
        const double denom = count[c] > 1 ? count[c] - 1 : 1.0;
        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                cov[c](i, j) /= denom;
                cov[c](j, i) = cov[c](i, j);
            }
            trace += cov[c](i, i);
        }
        // Shrink towards a scaled identity: Sigma + reg * trace/p * I.
        double ridge = reg_ * (trace > 0 ? trace / static_cast<double>(d) : 1.0);
        if (!(ridge > 0)) ridge = std::numeric_limits<double>::min();
        for (int attempt = 0;; ++attempt) {
            Matrix f = cov[c];
            for (std::size_t i = 0; i < d; ++i) f(i, i) += ridge;
            if (cholesky(f)) {
                chol_[c] = std::move(f);
                break;
            }
            if (attempt >= 15) throw FitError("quadratic_da: covariance not positive definite");
            ridge = ridge * 100.0 + 1e-12;
            if (attempt == 0)
                notes_.push_back("quadratic_da: class " + std::to_string(c) +
                                 " covariance singular, regularisation increased");
        }
        log_det_[c] = 0.0;
        for (std::size_t i = 0; i < d; ++i) log_det_[c] += 2.0 * std::log(chol_[c](i, i));
    }
}

std::vector<double> QuadraticDa::scores(const Matrix& x) const {
    const std::size_t d = x.cols();
    std::vector<double> out(x.rows());
    std::vector<double> z(d);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        double ll[2];
        for (int c = 0; c < 2; ++c) {
            // Mahalanobis distance via forward substitution L z = x - mu.
            const Matrix& l = chol_[c];
            double q = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                double s = row[i] - mean_[c][i];
                for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
                z[i] = s / l(i, i);
                q += z[i] * z[i];
            }
            ll[c] = log_prior_[c] - 0.5 * log_det_[c] - 0.5 * q;
        }
        out[r] = logistic_of_difference(ll[1], ll[0]);
    }
    return out;
}

}  // namespace imbsel
