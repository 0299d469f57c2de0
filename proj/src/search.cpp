#include "imbsel/search.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "imbsel/error.hpp"
#include "imbsel/rng.hpp"

namespace imbsel {

namespace {

enum : std::uint64_t { stream_split = 1, stream_sampler = 2, stream_model = 3 };

std::vector<std::string> all_columns_if_star(const Dataset& d, const std::vector<std::string>& cols) {
    if (cols.size() == 1 && cols[0] == "*") return d.feature_names;
    return cols;
}

}  // namespace

void validate(const GridConfig& cfg) {
    if (cfg.dims_list.empty()) throw ConfigError("grid: dims list is empty");
    for (auto d : cfg.dims_list)
        if (d < 1) throw ConfigError("grid: dims entries must be >= 1");
    if (cfg.sampler_specs.empty()) throw ConfigError("grid: no samplers");
    if (cfg.classifier_specs.empty()) throw ConfigError("grid: no classifiers");
    if (!is_metric_key(cfg.metric_key)) throw ConfigError("grid: unknown metric '" + cfg.metric_key + "'");
    if (cfg.top_k < 1) throw ConfigError("grid: top_k must be >= 1");
    const auto size = cfg.dims_list.size() * cfg.sampler_specs.size() * cfg.classifier_specs.size();
    if (cfg.top_k > size)
        throw ConfigError("grid: top_k " + std::to_string(cfg.top_k) + " exceeds grid size " +
                          std::to_string(size));
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw ConfigError("grid: test_fraction must lie in (0, 1)");
    if (cfg.cv_folds < 2) throw ConfigError("grid: cv_folds must be >= 2");
    for (const auto& s : cfg.sampler_specs) validate(s);
    for (const auto& c : cfg.classifier_specs) validate(c);
}

std::vector<Cell> enumerate_grid(const GridConfig& cfg) {
    std::vector<Cell> cells;
    cells.reserve(cfg.dims_list.size() * cfg.sampler_specs.size() * cfg.classifier_specs.size());
    for (auto dims : cfg.dims_list)
        for (std::size_t s = 0; s < cfg.sampler_specs.size(); ++s)
            for (std::size_t c = 0; c < cfg.classifier_specs.size(); ++c)
                cells.push_back({cells.size(), dims, s, c});
    return cells;
}

std::uint64_t cell_seed(std::uint64_t master_seed, const Cell& cell) {
    return derive_seed(master_seed, {0xCE11ULL, cell.index});
}

std::vector<std::string> clamp_dims(std::vector<std::size_t>& dims_list, std::size_t max_dims) {
    std::vector<std::string> warnings;
    for (auto& d : dims_list) {
        if (d > max_dims) {
            warnings.push_back("dims " + std::to_string(d) + " exceeds available width " +
                               std::to_string(max_dims) + "; clamped");
            d = max_dims;
        }
    }
    return warnings;
}

// ---------------------------------------------------------------------------

FeatureStage FeatureStage::fit(Mode mode, const Dataset& train, const std::string& encoded_prefix,
                               std::vector<std::string> raw_columns) {
    FeatureStage s;
    s.mode_ = mode;
    switch (mode) {
        case Mode::pca: s.pca_ = std::make_shared<const PcaModel>(pca_fit(train)); break;
        case Mode::passthrough:
            s.layout_ = detect_encoded_layout(train, encoded_prefix, std::move(raw_columns));
            if (s.layout_.encoded.empty())
                throw ConfigError("passthrough: no columns named " + encoded_prefix + "<n>");
            break;
        case Mode::raw: s.layout_.encoded = train.feature_names; break;
    }
    return s;
}

std::size_t FeatureStage::max_dims() const noexcept {
    return mode_ == Mode::pca ? pca_->width() : layout_.encoded.size();
}

Dataset FeatureStage::apply(const Dataset& d, std::size_t dims) const {
    if (mode_ == Mode::pca) return pca_transform(*pca_, d, dims);
    return pca_passthrough_select(d, layout_, dims);
}

// ---------------------------------------------------------------------------

EvaluationRecord evaluate_cell(const Cell& cell, const GridConfig& cfg, const FeatureStage& stage,
                               const Dataset& train, const Dataset& test) {
    EvaluationRecord rec;
    rec.cell = cell;
    rec.order_key = cell.index;
    const auto& cspec = cfg.classifier_specs.at(cell.classifier);
    const auto& sspec = cfg.sampler_specs.at(cell.sampler);
    rec.model = cspec.label();
    rec.sampler = sspec.label();
    rec.dims_label = std::to_string(cell.dims);
    rec.seed_used = cell_seed(cfg.master_seed, cell);
    try {
        const Dataset tr = stage.apply(train, cell.dims);
        const Dataset te = stage.apply(test, cell.dims);
        const Dataset balanced = resample(sspec, tr, derive_seed(rec.seed_used, {stream_sampler}));
        const auto model = imbsel::train(cspec, balanced, derive_seed(rec.seed_used, {stream_model}));
        const auto scores = model.predict_scores(te.features);
        const auto labels = threshold_scores(scores, model.threshold());
        rec.metrics = evaluate_predictions(te.labels, labels, scores);
        rec.metrics.train_time_seconds = model.train_time_seconds();
        rec.notes = model.notes();
        for (auto& n : degenerate_names(rec.metrics.flags)) rec.notes.push_back("degenerate:" + n);
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure = e.what();
    }
    return rec;
}

// ---------------------------------------------------------------------------

bool ranks_before(const EvaluationRecord& a, const EvaluationRecord& b, const std::string& key) {
    if (a.failed != b.failed) return !a.failed;
    if (!a.failed) {
        const double sa = metric_score(a.metrics, key);
        const double sb = metric_score(b.metrics, key);
        if (sa != sb) return sa > sb;
        if (a.metrics.train_time_seconds != b.metrics.train_time_seconds)
            return a.metrics.train_time_seconds < b.metrics.train_time_seconds;
    }
    return a.order_key < b.order_key;
}

Leaderboard rank(std::vector<EvaluationRecord> records, const std::string& metric_key) {
    if (!is_metric_key(metric_key)) throw ConfigError("rank: unknown metric '" + metric_key + "'");
    std::stable_sort(records.begin(), records.end(), [&](const auto& a, const auto& b) {
        return ranks_before(a, b, metric_key);
    });
    return {metric_key, std::move(records)};
}

// ---------------------------------------------------------------------------

EnsembleSpec build_ensemble(const std::vector<Cell>& top, VoteMode mode, const GridConfig& cfg,
                            const FeatureStage& stage, const Dataset& train) {
    if (top.empty()) throw ConfigError("ensemble: no members");
    EnsembleSpec e;
    e.mode = mode;
    for (const auto& cell : top) {
        const auto seed = cell_seed(cfg.master_seed, cell);
        const Dataset tr = stage.apply(train, cell.dims);
        const Dataset balanced =
            resample(cfg.sampler_specs.at(cell.sampler), tr, derive_seed(seed, {stream_sampler}));
        e.members.push_back(
            {cell, imbsel::train(cfg.classifier_specs.at(cell.classifier), balanced, derive_seed(seed, {stream_model}))});
    }
    return e;
}

std::vector<int> hard_vote(const std::vector<std::vector<int>>& member_labels) {
    const std::size_t k = member_labels.size();
    if (k == 0 || k % 2 == 0)
        throw ConfigError("hard vote needs an odd number of members, got " + std::to_string(k));
    const std::size_t n = member_labels[0].size();
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t yes = 0;
        for (const auto& m : member_labels) yes += static_cast<std::size_t>(m[i]);
        out[i] = 2 * yes > k ? 1 : 0;
    }
    return out;
}

std::vector<int> soft_vote(const std::vector<std::vector<double>>& member_scores) {
    if (member_scores.empty()) throw ConfigError("soft vote needs at least one member");
    const std::size_t n = member_scores[0].size();
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& m : member_scores) s += m[i];
        out[i] = s / static_cast<double>(member_scores.size()) > 0.5 ? 1 : 0;
    }
    return out;
}

std::vector<double> normalize_margins(const std::vector<double>& margins) {
    if (margins.empty()) return {};
    const auto [lo, hi] = std::minmax_element(margins.begin(), margins.end());
    std::vector<double> out(margins.size());
    if (*hi == *lo) {
        std::fill(out.begin(), out.end(), *lo > 0.0 ? 1.0 : 0.0);
        return out;
    }
    for (std::size_t i = 0; i < margins.size(); ++i) out[i] = (margins[i] - *lo) / (*hi - *lo);
    return out;
}

EvaluationRecord evaluate_ensemble(const EnsembleSpec& e, const FeatureStage& stage, const Dataset& test) {
    EvaluationRecord rec;
    rec.ensemble = true;
    rec.model = e.mode == VoteMode::hard ? "Vote Hard" : "Vote Soft";
    std::set<std::size_t> dims;
    for (const auto& m : e.members) dims.insert(m.cell.dims);
    for (auto d : dims) rec.dims_label += (rec.dims_label.empty() ? "" : "/") + std::to_string(d);
    try {
        std::vector<std::vector<int>> labels;
        std::vector<std::vector<double>> scores;
        double time = 0.0;
        for (const auto& m : e.members) {
            const Dataset te = stage.apply(test, m.cell.dims);
            auto s = m.model.predict_scores(te.features);
            labels.push_back(threshold_scores(s, m.model.threshold()));
            if (!m.model.supports_probability()) {
                s = normalize_margins(s);
                if (e.mode == VoteMode::soft) rec.notes.push_back("soft:minmax_margins:" + m.model.spec().label());
            }
            scores.push_back(std::move(s));
            time += m.model.train_time_seconds();
        }
        std::vector<double> mean(test.rows(), 0.0);
        for (const auto& s : scores)
            for (std::size_t i = 0; i < s.size(); ++i) mean[i] += s[i] / static_cast<double>(scores.size());
        const auto pred = e.mode == VoteMode::hard ? hard_vote(labels) : soft_vote(scores);
        rec.metrics = evaluate_predictions(test.labels, pred, mean);
        rec.metrics.train_time_seconds = time;
        for (auto& n : degenerate_names(rec.metrics.flags)) rec.notes.push_back("degenerate:" + n);
    } catch (const std::exception& ex) {
        rec.failed = true;
        rec.failure = ex.what();
    }
    return rec;
}

// ---------------------------------------------------------------------------

RunResult run_grid(const GridConfig& cfg_in, const Dataset& data, const RunOptions& opts) {
    GridConfig cfg = cfg_in;
    validate(cfg);
    data.validate();
    RunResult result;

    result.split = stratified_split(data, cfg.test_fraction, derive_seed(cfg.master_seed, {stream_split}));
    Dataset train = subset(data, result.split.train_idx);
    Dataset test = subset(data, result.split.test_idx);
    result.split.fold_assignments = stratified_folds(result.split.train_idx, data.labels, cfg.cv_folds,
                                                     derive_seed(cfg.master_seed, {stream_split, 1}));

    const auto std_cols = all_columns_if_star(train, opts.standardize_columns);
    if (!std_cols.empty()) {
        const auto params = fit_standardizer(train, std_cols);
        for (const auto& c : params.constant_columns)
            result.warnings.push_back("constant column '" + c + "' standardised with stddev 1");
        train = apply_standardizer(train, params);
        test = apply_standardizer(test, params);
    }
    const Dataset& frozen_test = test;
    result.test_checksum = checksum(frozen_test);

    const FeatureStage stage = FeatureStage::fit(opts.feature_mode, train, opts.encoded_prefix, opts.raw_columns);
    auto clamped = clamp_dims(cfg.dims_list, stage.max_dims());
    result.warnings.insert(result.warnings.end(), clamped.begin(), clamped.end());

    const auto cells = enumerate_grid(cfg);
    result.grid_size = cells.size();
    result.cell_records.resize(cells.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
            result.cell_records[i] = evaluate_cell(cells[i], cfg, stage, train, frozen_test);
    };
    const int workers = std::max(1, opts.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    if (!opts.record_timing)
        for (auto& r : result.cell_records) r.metrics.train_time_seconds = 0.0;
    for (const auto& r : result.cell_records) result.failed_cells += r.failed ? 1 : 0;

    auto ranked = rank(result.cell_records, cfg.metric_key);

    if (opts.build_ensembles) {
        std::vector<Cell> top;
        for (const auto& r : ranked.records) {
            if (top.size() == cfg.top_k) break;
            if (!r.failed) top.push_back(r.cell);
        }
        if (top.size() < cfg.top_k)
            result.warnings.push_back("only " + std::to_string(top.size()) +
                                      " successful cells available for the ensemble");
        // Members are trained once and shared by both vote modes.
        std::optional<EnsembleSpec> ens;
        std::string build_error;
        try {
            ens = build_ensemble(top, VoteMode::hard, cfg, stage, train);
        } catch (const std::exception& ex) {
            build_error = ex.what();
        }
        for (VoteMode mode : {VoteMode::hard, VoteMode::soft}) {
            EvaluationRecord rec;
            if (ens) {
                if (checksum(frozen_test) != result.test_checksum)
                    throw std::logic_error("leakage guard: test split bytes changed during the run");
                ens->mode = mode;
                rec = evaluate_ensemble(*ens, stage, frozen_test);
            } else {
                rec.ensemble = true;
                rec.model = mode == VoteMode::hard ? "Vote Hard" : "Vote Soft";
                rec.failed = true;
                rec.failure = build_error;
            }
            rec.order_key = cells.size() + (mode == VoteMode::hard ? 0 : 1);
            rec.cell.index = rec.order_key;
            rec.seed_used = cfg.master_seed;
            if (!opts.record_timing) rec.metrics.train_time_seconds = 0.0;
            result.ensemble_records.push_back(std::move(rec));
        }
        const auto& hard = result.ensemble_records[0];
        const auto& soft = result.ensemble_records[1];
        if (!hard.failed && !soft.failed) {
            const double h = metric_score(hard.metrics, cfg.metric_key);
            const double s = metric_score(soft.metrics, cfg.metric_key);
            result.vote_winner = h > s ? "hard" : s > h ? "soft" : "tie";
        }
    }

    if (checksum(frozen_test) != result.test_checksum)
        throw std::logic_error("leakage guard: test split bytes changed during the run");

    std::vector<EvaluationRecord> all = result.cell_records;
    all.insert(all.end(), result.ensemble_records.begin(), result.ensemble_records.end());
    result.leaderboard = rank(std::move(all), cfg.metric_key);
    return result;
}

}  // namespace imbsel
