#include "imbsel/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "imbsel/error.hpp"

namespace imbsel {

namespace {

using nlohmann::json;

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Quotes a CSV field when it contains separators or quotes.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string sanitize(std::string s) {
    for (auto& ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '-';
    return s;
}

json metrics_json(const MetricRecord& m) {
    return {
        {"accuracy", m.accuracy},
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"gmean", m.gmean},
        {"auroc_point", m.auroc_point},
        {"auroc_curve", m.auroc_curve},
        {"cohen_kappa", m.cohen_kappa},
        {"matthews", m.matthews},
        {"hamming_loss", m.hamming_loss},
        {"train_time_seconds", m.train_time_seconds},
        {"confusion", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"fn", m.counts.fn}, {"tn", m.counts.tn}}},
    };
}

}  // namespace

std::string_view version() { return "0.1.0"; }

std::string leaderboard_csv(const Leaderboard& lb) {
    std::ostringstream out;
    out << "Model,Sampler,Dims,Acc,Preci,Recall,F1,G-mean,auroc_point,auroc_curve,Cohen,Matthew,Hamm,Time,Status\n";
    for (const auto& r : lb.records) {
        out << csv_field(r.model) << ',' << csv_field(r.sampler) << ',' << csv_field(r.dims_label);
        if (r.failed) {
            out << std::string(11, ',') << csv_field("failed: " + r.failure) << '\n';
            continue;
        }
        const auto& m = r.metrics;
        for (double v : {m.accuracy, m.precision, m.recall, m.f1, m.gmean, m.auroc_point, m.auroc_curve,
                         m.cohen_kappa, m.matthews, m.hamming_loss, m.train_time_seconds})
            out << ',' << fixed4(v);
        out << ",ok\n";
    }
    return out.str();
}

std::string leaderboard_json(const Leaderboard& lb, const RunResult& run) {
    json records = json::array();
    std::size_t rank = 0;
    for (const auto& r : lb.records) {
        json j = {
            {"rank", ++rank},
            {"model", r.model},
            {"sampler", r.sampler},
            {"dims", r.dims_label},
            {"ensemble", r.ensemble},
            {"cell_index", r.cell.index},
            {"seed", r.seed_used},
            {"status", r.failed ? "failed" : "ok"},
            {"notes", r.notes},
        };
        if (r.failed) j["failure"] = r.failure;
        else j["metrics"] = metrics_json(r.metrics);
        records.push_back(std::move(j));
    }
    json doc = {
        {"metric_key", lb.metric_key},
        {"grid_size", run.grid_size},
        {"failed_cells", run.failed_cells},
        {"records", std::move(records)},
        {"warnings", run.warnings},
    };
    doc["vote_winner"] = run.vote_winner ? json(*run.vote_winner) : json(nullptr);
    return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> figure_series(const GridConfig& cfg, const RunResult& run,
                                                               const std::vector<std::string>& metrics) {
    std::vector<std::pair<std::string, std::string>> files;
    const std::size_t n_cls = cfg.classifier_specs.size();
    const std::size_t n_smp = cfg.sampler_specs.size();
    for (const auto& metric : metrics) {
        for (std::size_t s = 0; s < n_smp; ++s) {
            std::ostringstream out;
            out << "Dims";
            for (const auto& c : cfg.classifier_specs) out << ',' << csv_field(c.label());
            out << '\n';
            for (std::size_t d = 0; d < cfg.dims_list.size(); ++d) {
                // Enumeration order: dims outer, sampler middle, classifier inner.
                const std::size_t base = (d * n_smp + s) * n_cls;
                out << run.cell_records[base].cell.dims;
                for (std::size_t c = 0; c < n_cls; ++c) {
                    const auto& r = run.cell_records[base + c];
                    out << ',';
                    if (!r.failed) out << fixed4(metric_value(r.metrics, metric));
                }
                out << '\n';
            }
            const auto& spec = cfg.sampler_specs[s];
            files.emplace_back(metric + "__" + std::to_string(s) + "_" + sanitize(spec.label()) + ".csv", out.str());
        }
    }
    return files;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataError::Kind::missing_file, path.string() + ": cannot open file");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

std::string run_manifest_json(const GridConfig& cfg, const RunResult& run, const ManifestInfo& info) {
    json samplers = json::array();
    for (const auto& s : cfg.sampler_specs) samplers.push_back({{"kind", to_string(s.kind)}, {"label", s.label()}, {"target_ratio", s.target_ratio}});
    json classifiers = json::array();
    for (const auto& c : cfg.classifier_specs)
        classifiers.push_back({{"kind", to_string(c.kind)}, {"label", c.label()}, {"params", c.params}});
    json doc = {
        {"tool", "imbsel"},
        {"version", version()},
        {"master_seed", cfg.master_seed},
        {"dataset", {{"path", info.dataset_path}, {"checksum_fnv1a64", info.dataset_checksum},
                     {"rows", info.dataset_rows}, {"width", info.dataset_width}}},
        {"split", {{"train_rows", run.split.train_idx.size()}, {"test_rows", run.split.test_idx.size()},
                   {"test_fraction", cfg.test_fraction}, {"test_checksum", run.test_checksum}}},
        {"grid_size", run.grid_size},
        {"dims_list", cfg.dims_list},
        {"samplers", samplers},
        {"classifiers", classifiers},
        {"metric_key", cfg.metric_key},
        {"top_k", cfg.top_k},
        {"failed_cells", run.failed_cells},
        {"workers", info.workers},
        {"wall_time_seconds", info.wall_time_seconds},
        {"warnings", run.warnings},
    };
    doc["vote_winner"] = run.vote_winner ? json(*run.vote_winner) : json(nullptr);
    return doc.dump(2) + "\n";
}

}  // namespace imbsel
