#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imbsel/classifiers.hpp"
#include "imbsel/data_io.hpp"
#include "imbsel/metrics.hpp"
#include "imbsel/pca.hpp"
#include "imbsel/sampling.hpp"

namespace imbsel {

struct GridConfig {
    std::vector<std::size_t> dims_list;
    std::vector<SamplerSpec> sampler_specs;
    std::vector<ClassifierSpec> classifier_specs;
    std::string metric_key = "f1";
    std::size_t top_k = 3;
    double test_fraction = 0.2;
    int cv_folds = 5;
    std::uint64_t master_seed = 42;
};

/// Throws ConfigError on the first invalid field.
void validate(const GridConfig& cfg);

/// One (dims, sampler, classifier) combination; indices point into GridConfig.
struct Cell {
    std::size_t index = 0;
    std::size_t dims = 0;
    std::size_t sampler = 0;
    std::size_t classifier = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Cartesian product, dims outermost and classifier innermost.
std::vector<Cell> enumerate_grid(const GridConfig& cfg);

/// Seed for a cell; depends only on the master seed and the cell index.
std::uint64_t cell_seed(std::uint64_t master_seed, const Cell& cell);

/// Node A. How a cell's `dims` turns the full feature set into model inputs.
class FeatureStage {
public:
    enum class Mode {
        pca,          // fit PCA on the train split, keep the first dims components
        passthrough,  // already encoded: keep the first dims encoded columns (+ raw extras)
        raw,          // keep the first dims columns in file order
    };

    static FeatureStage fit(Mode mode, const Dataset& train, const std::string& encoded_prefix = "V",
                            std::vector<std::string> raw_columns = {});

    Dataset apply(const Dataset& d, std::size_t dims) const;
    /// Largest accepted dims value.
    std::size_t max_dims() const noexcept;
    Mode mode() const noexcept { return mode_; }
    const PcaModel* pca() const noexcept { return pca_.get(); }

private:
    Mode mode_ = Mode::raw;
    EncodedLayout layout_;
    std::shared_ptr<const PcaModel> pca_;
};

struct EvaluationRecord {
    Cell cell;
    std::string model;
    std::string sampler;
    std::string dims_label;
    MetricRecord metrics;
    std::vector<std::string> notes;
    std::uint64_t seed_used = 0;
    bool failed = false;
    std::string failure;
    /// Position used for the final lexicographic tie-break.
    std::size_t order_key = 0;
    bool ensemble = false;
};

/// Pipeline for one cell: select/transform dims, resample train only, fit,
/// score the untouched test split. Stage failures are captured in the record.
EvaluationRecord evaluate_cell(const Cell& cell, const GridConfig& cfg, const FeatureStage& stage,
                               const Dataset& train, const Dataset& test);

struct Leaderboard {
    std::string metric_key;
    std::vector<EvaluationRecord> records;
};

/// Metric descending, then train time ascending, then order_key; failed records last.
Leaderboard rank(std::vector<EvaluationRecord> records, const std::string& metric_key);

/// Strict weak ordering used by rank().
bool ranks_before(const EvaluationRecord& a, const EvaluationRecord& b, const std::string& metric_key);

enum class VoteMode { hard, soft };

struct EnsembleMember {
    Cell cell;
    TrainedModel model;
};

struct EnsembleSpec {
    std::vector<EnsembleMember> members;
    VoteMode mode = VoteMode::hard;
};

/// Retrains each cell on its own pipeline (dims, sampler, seed).
EnsembleSpec build_ensemble(const std::vector<Cell>& top, VoteMode mode, const GridConfig& cfg,
                            const FeatureStage& stage, const Dataset& train);

/// Strict majority of member labels; throws on an even member count.
std::vector<int> hard_vote(const std::vector<std::vector<int>>& member_labels);

/// Mean of member scores thresholded at 0.5 (scores must already lie in [0,1]).
std::vector<int> soft_vote(const std::vector<std::vector<double>>& member_scores);

/// Min-max maps margins onto [0,1]; a constant batch maps to its label (0 or 1).
std::vector<double> normalize_margins(const std::vector<double>& margins);

EvaluationRecord evaluate_ensemble(const EnsembleSpec& e, const FeatureStage& stage, const Dataset& test);

struct RunOptions {
    int workers = 1;
    /// When false, train times are reported as zero so leaderboards are
    /// byte-reproducible and time never breaks ties.
    bool record_timing = false;
    bool build_ensembles = true;
    FeatureStage::Mode feature_mode = FeatureStage::Mode::pca;
    std::string encoded_prefix = "V";
    std::vector<std::string> raw_columns;
    /// Columns standardised with train statistics; the literal "*" means all.
    std::vector<std::string> standardize_columns;
};

struct RunResult {
    SplitIndices split;
    std::size_t grid_size = 0;
    std::vector<EvaluationRecord> cell_records;  // enumeration order
    std::vector<EvaluationRecord> ensemble_records;
    Leaderboard leaderboard;
    std::vector<std::string> warnings;
    std::uint64_t test_checksum = 0;
    std::size_t failed_cells = 0;
    std::optional<std::string> vote_winner;
};

/// Executes every cell with `workers` threads, ranks, and evaluates the
/// hard/soft ensembles of the top_k cells. Results do not depend on the
/// worker count.
RunResult run_grid(const GridConfig& cfg, const Dataset& data, const RunOptions& opts);

/// Clamps dims entries above `max_dims`; returns one warning per clamped entry.
std::vector<std::string> clamp_dims(std::vector<std::size_t>& dims_list, std::size_t max_dims);

}  // namespace imbsel
