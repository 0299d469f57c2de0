#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbsel/error.hpp"
#include "imbsel/models.hpp"

namespace imbsel {

namespace {

// Leaf class probabilities are clipped away from 0 and 1 before taking logs.
constexpr double prob_clip = 1e-10;

struct StumpSearch {
    Stump stump;
    double objective = 0.0;  // discrete: weighted error; real: Z = 2 * sum sqrt(W+ W-)
};

double half_log_odds(double wpos, double wneg) {
    double p = (wpos + wneg) > 0 ? wpos / (wpos + wneg) : 0.5;
    p = std::clamp(p, prob_clip, 1.0 - prob_clip);
    return 0.5 * std::log(p / (1.0 - p));
}

// Scans every feature in index order and every threshold ascending; strict
// improvement is required, so ties keep the lowest feature and threshold.
StumpSearch best_stump(const Matrix& x, std::span<const int> y, std::span<const double> w,
                       const std::vector<std::vector<std::size_t>>& order, AdaBoost::Variant v) {
    double wpos = 0, wneg = 0;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? wpos : wneg) += w[i];
    const double total = wpos + wneg;

    StumpSearch best;
    if (v == AdaBoost::Variant::discrete) {
        // Constant learner as the baseline.
        best.stump = {-1, 0.0, wpos >= wneg ? 1.0 : -1.0, wpos >= wneg ? 1.0 : -1.0};
        best.objective = std::min(wpos, wneg);
    } else {
        const double h = half_log_odds(wpos, wneg);
        best.stump = {-1, 0.0, h, h};
        best.objective = 2.0 * std::sqrt(wpos * wneg);
    }

    bool have_split = false;
    for (std::size_t f = 0; f < x.cols(); ++f) {
        const auto& ord = order[f];
        double lpos = 0, lneg = 0;
        for (std::size_t k = 0; k + 1 < ord.size(); ++k) {
            const std::size_t i = ord[k];
            (y[i] == 1 ? lpos : lneg) += w[i];
            const double a = x(i, f);
            const double b = x(ord[k + 1], f);
            if (a == b) continue;
            const double rpos = wpos - lpos;
            const double rneg = wneg - lneg;
            double obj;
            Stump s{static_cast<int>(f), 0.5 * (a + b), 0.0, 0.0};
            if (!(s.threshold < b)) s.threshold = a;
            if (v == AdaBoost::Variant::discrete) {
                // Polarity A: left -> -1, right -> +1. Polarity B is the complement.
                const double err_a = lpos + rneg;
                const double err_b = total - err_a;
                if (err_a <= err_b) {
                    obj = err_a;
                    s.left = -1.0;
                    s.right = 1.0;
                } else {
                    obj = err_b;
                    s.left = 1.0;
                    s.right = -1.0;
                }
            } else {
                obj = 2.0 * (std::sqrt(lpos * lneg) + std::sqrt(std::max(0.0, rpos * rneg)));
                s.left = half_log_odds(lpos, lneg);
                s.right = half_log_odds(rpos, rneg);
            }
            if (!have_split ? obj <= best.objective : obj < best.objective) {
                // A split replaces the constant learner when at least as good.
                best = {s, obj};
                have_split = true;
            }
        }
    }
    best.objective /= total;
    return best;
}

}  // namespace

void AdaBoost::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    const std::size_t n = x.rows();
    stumps_.clear();
    alphas_.clear();
    errors_.clear();

    std::vector<std::vector<std::size_t>> order(x.cols(), std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < x.cols(); ++f) {
        auto& o = order[f];
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    }

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < rounds_; ++round) {
        const auto found = best_stump(x, y, w, order, variant_);
        const Stump& s = found.stump;

        if (variant_ == Variant::discrete) {
            const double err = found.objective;
            if (err >= 0.5) {
                // No learner beats chance; keep one so the model can still predict.
                if (stumps_.empty()) {
                    stumps_.push_back(s);
                    alphas_.push_back(1.0);
                    errors_.push_back(err);
                }
                break;
            }
            if (err <= 0.0) {
                stumps_.push_back(s);
                alphas_.push_back(1.0);
                errors_.push_back(0.0);
                break;
            }
            const double alpha = std::log((1.0 - err) / err);
            stumps_.push_back(s);
            alphas_.push_back(alpha);
            errors_.push_back(err);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double pred = s.eval(x.row(i));
                const double truth = y[i] == 1 ? 1.0 : -1.0;
                if (pred != truth) w[i] *= std::exp(alpha);
                sum += w[i];
            }
            for (auto& v : w) v /= sum;
        } else {
            stumps_.push_back(s);
            alphas_.push_back(1.0);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double truth = y[i] == 1 ? 1.0 : -1.0;
                w[i] *= std::exp(-truth * s.eval(x.row(i)));
                sum += w[i];
            }
            if (!(sum > 0.0) || !std::isfinite(sum)) break;
            for (auto& v : w) v /= sum;
        }
    }
}

std::vector<double> AdaBoost::scores(const Matrix& x) const {
    std::vector<double> out(x.rows());
    double alpha_sum = 0.0;
    for (double a : alphas_) alpha_sum += a;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        double f = 0.0;
        for (std::size_t t = 0; t < stumps_.size(); ++t) f += alphas_[t] * stumps_[t].eval(row);
        if (variant_ == Variant::discrete) {
            // Normalised vote in [-1, 1] mapped onto [0, 1].
            out[r] = alpha_sum > 0 ? 0.5 * (f / alpha_sum + 1.0) : 0.5;
        } else {
            // Additive half log-odds back to a probability.
            out[r] = 1.0 / (1.0 + std::exp(-2.0 * f));
        }
    }
    return out;
}

AdaBoost AdaBoost::from_parts(Variant v, std::vector<Stump> stumps, std::vector<double> alphas) {
    AdaBoost a(v, static_cast<int>(stumps.size()));
    a.stumps_ = std::move(stumps);
    a.alphas_ = std::move(alphas);
    return a;
}

}  // namespace imbsel
