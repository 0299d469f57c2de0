#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbsel/error.hpp"
#include "imbsel/models.hpp"

namespace imbsel {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double score = -1.0;  // sum over children of (c0^2 + c1^2) / n_child; higher is purer
};

struct ValueLabel {
    double value;
    int label;
};

struct Frame {
    int node;
    std::size_t begin;
    std::size_t end;
    int depth;
};

}  // namespace

void DecisionTree::fit(const std::vector<std::vector<double>>& columns, std::span<const int> y,
                       std::vector<std::size_t> samples, const TreeParams& params, Rng* rng) {
    nodes_.clear();
    depth_ = 0;
    const std::size_t width = columns.size();
    if (samples.empty()) throw FitError("decision_tree: no samples");

    const std::size_t max_features =
        params.max_features <= 0 ? width
                                 : std::min<std::size_t>(width, static_cast<std::size_t>(params.max_features));
    if (max_features < width && rng == nullptr)
        throw FitError("decision_tree: feature subsampling needs a random source");

    std::vector<ValueLabel> buf(samples.size());
    std::vector<std::size_t> features(width);
    std::vector<Frame> stack;
    nodes_.push_back({});
    stack.push_back({0, 0, samples.size(), 0});

    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        depth_ = std::max(depth_, f.depth);
        const std::size_t n = f.end - f.begin;
        std::size_t pos = 0;
        for (std::size_t i = f.begin; i < f.end; ++i) pos += static_cast<std::size_t>(y[samples[i]]);
        nodes_[f.node].positive_fraction = static_cast<double>(pos) / static_cast<double>(n);

        const bool pure = pos == 0 || pos == n;
        const bool depth_capped = params.max_depth > 0 && f.depth >= params.max_depth;
        if (pure || depth_capped || n < static_cast<std::size_t>(params.min_samples_split)) continue;

        // Candidate features: a random subset, widened in draw order when every
        // sampled feature is constant on this node.
        std::iota(features.begin(), features.end(), 0);
        if (max_features < width) shuffle(std::span(features), *rng);

        SplitChoice best;
        std::size_t examined = 0;
        std::size_t next = 0;
        bool found_valid = false;
        while (next < width && (examined < max_features || !found_valid)) {
            // Take the next batch of candidates and scan them in index order so
            // that equal gains resolve to the lowest feature index.
            const std::size_t batch = examined < max_features ? max_features - examined : 1;
            std::vector<std::size_t> group(features.begin() + static_cast<std::ptrdiff_t>(next),
                                           features.begin() + static_cast<std::ptrdiff_t>(std::min(width, next + batch)));
            next += group.size();
            examined += group.size();
            std::sort(group.begin(), group.end());

            for (std::size_t feat : group) {
                const auto& col = columns[feat];
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t s = samples[f.begin + i];
                    buf[i] = {col[s], y[s]};
                }
                std::sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n),
                          [](const ValueLabel& a, const ValueLabel& b) { return a.value < b.value; });
                if (buf[0].value == buf[n - 1].value) continue;
                found_valid = true;

                double left_pos = 0.0;
                const double total_pos = static_cast<double>(pos);
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    left_pos += buf[i].label;
                    if (buf[i].value == buf[i + 1].value) continue;
                    const double nl = static_cast<double>(i + 1);
                    const double nr = static_cast<double>(n) - nl;
                    const double lp = left_pos, ln = nl - left_pos;
                    const double rp = total_pos - left_pos, rn = nr - rp;
                    const double score = (lp * lp + ln * ln) / nl + (rp * rp + rn * rn) / nr;
                    if (score > best.score) {
                        double mid = 0.5 * (buf[i].value + buf[i + 1].value);
                        if (!(mid < buf[i + 1].value)) mid = buf[i].value;
                        best = {static_cast<int>(feat), mid, score};
                    } else if (score == best.score && static_cast<int>(feat) < best.feature) {
                        double mid = 0.5 * (buf[i].value + buf[i + 1].value);
                        if (!(mid < buf[i + 1].value)) mid = buf[i].value;
                        best = {static_cast<int>(feat), mid, score};
                    }
                }
            }
        }
        if (best.feature < 0) continue;

        const auto& col = columns[static_cast<std::size_t>(best.feature)];
        auto mid_it = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(f.begin),
                                     samples.begin() + static_cast<std::ptrdiff_t>(f.end),
                                     [&](std::size_t s) { return col[s] <= best.threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - samples.begin());

        const int left = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        const int right = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        Node& node = nodes_[f.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        stack.push_back({right, mid, f.end, f.depth + 1});
        stack.push_back({left, f.begin, mid, f.depth + 1});
    }
}

double DecisionTree::predict_proba(std::span<const double> row) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                             : n.right);
    }
    return nodes_[i].positive_fraction;
}

// ---------------------------------------------------------------------------

void DecisionTreeClassifier::fit(const Matrix& x, std::span<const int> y, std::uint64_t) {
    std::vector<std::size_t> samples(x.rows());
    std::iota(samples.begin(), samples.end(), 0);
    TreeParams p = params_;
    p.max_features = 0;
    tree_.fit(to_columns(x), y, std::move(samples), p, nullptr);
}

std::vector<double> DecisionTreeClassifier::scores(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = tree_.predict_proba(x.row(r));
    return out;
}

// ---------------------------------------------------------------------------

void RandomForest::fit(const Matrix& x, std::span<const int> y, std::uint64_t seed) {
    const auto columns = to_columns(x);
    const std::size_t n = x.rows();
    TreeParams p = params_;
    if (p.max_features <= 0)
        p.max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));

    trees_.assign(static_cast<std::size_t>(n_trees_), {});
    std::vector<std::size_t> samples(n);
    for (int t = 0; t < n_trees_; ++t) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
        for (auto& s : samples) s = static_cast<std::size_t>(uniform_index(rng, n));
        trees_[static_cast<std::size_t>(t)].fit(columns, y, samples, p, &rng);
    }
}

std::vector<int> RandomForest::tree_votes(std::span<const double> row) const {
    std::vector<int> votes;
    votes.reserve(trees_.size());
    for (const auto& t : trees_) votes.push_back(t.predict_proba(row) > 0.5 ? 1 : 0);
    return votes;
}

std::vector<double> RandomForest::scores(const Matrix& x) const {
    std::vector<double> out(x.rows());
    const double inv = 1.0 / static_cast<double>(trees_.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        std::size_t yes = 0;
        for (const auto& t : trees_) yes += t.predict_proba(row) > 0.5 ? 1u : 0u;
        out[r] = static_cast<double>(yes) * inv;
    }
    return out;
}

}  // namespace imbsel
