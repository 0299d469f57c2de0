#include "imbsel/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "imbsel/error.hpp"

namespace imbsel {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string_view::npos) end = s.size();
        auto item = trim(s.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

bool parse_bool(std::string_view s, bool& out) {
    s = trim(s);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return out = true, true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return out = false, true;
    return false;
}

struct Entry {
    std::string value;
    int line;
};

// Ordered sections preserve declaration order for samplers and classifiers.
struct Section {
    std::string name;
    int line = 0;
    std::vector<std::pair<std::string, Entry>> entries;
};

class Reader {
public:
    Reader(const Section& s, std::vector<Diagnostic>& diags) : s_(s), diags_(diags) {}

    const Entry* get(const std::string& key) {
        used_.push_back(key);
        for (const auto& [k, e] : s_.entries)
            if (k == key) return &e;
        return nullptr;
    }

    template <typename T>
    void number(const std::string& key, T& out) {
        if (auto e = get(key))
            if (!parse_number(e->value, out)) error(*e, key, "expected a number");
    }

    void boolean(const std::string& key, bool& out) {
        if (auto e = get(key))
            if (!parse_bool(e->value, out)) error(*e, key, "expected true/false");
    }

    void string(const std::string& key, std::string& out) {
        if (auto e = get(key)) out = e->value;
    }

    void error(const Entry& e, const std::string& key, const std::string& what) {
        diags_.push_back({Diagnostic::Severity::error, "line " + std::to_string(e.line) + ": [" + s_.name +
                                                           "] " + key + ": " + what});
    }

    /// Reports keys never asked for.
    void finish() {
        for (const auto& [k, e] : s_.entries)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                diags_.push_back({Diagnostic::Severity::error, "line " + std::to_string(e.line) +
                                                                   ": [" + s_.name + "] unknown key '" + k + "'"});
    }

    const Section& section() const { return s_; }

private:
    const Section& s_;
    std::vector<Diagnostic>& diags_;
    std::vector<std::string> used_;
};

void err(std::vector<Diagnostic>& d, std::string msg) { d.push_back({Diagnostic::Severity::error, std::move(msg)}); }

}  // namespace

bool ParsedConfig::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::optional<std::vector<std::size_t>> parse_dims_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            std::size_t v = 0;
            if (!parse_number(item, v)) return std::nullopt;
            out.push_back(v);
        } else {
            std::size_t lo = 0, hi = 0;
            if (!parse_number(std::string_view(item).substr(0, dash), lo) ||
                !parse_number(std::string_view(item).substr(dash + 1), hi) || lo > hi)
                return std::nullopt;
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        }
    }
    if (out.empty()) return std::nullopt;
    return out;
}

ParsedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    ParsedConfig parsed;
    auto& diags = parsed.diagnostics;
    RunConfig& cfg = parsed.config;
    cfg.base_dir = base_dir;
    cfg.grid.dims_list.clear();

    std::vector<Section> sections;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                err(diags, "line " + std::to_string(line_no) + ": malformed section header");
                continue;
            }
            sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            err(diags, "line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        if (sections.empty()) {
            err(diags, "line " + std::to_string(line_no) + ": key outside any section");
            continue;
        }
        sections.back().entries.emplace_back(std::string(trim(line.substr(0, eq))),
                                              Entry{std::string(trim(line.substr(eq + 1))), line_no});
    }

    bool saw_dims = false;
    std::map<std::string, int> seen;
    for (const auto& sec : sections) {
        if (seen[sec.name]++ > 0) err(diags, "line " + std::to_string(sec.line) + ": duplicate section [" + sec.name + "]");
        Reader r(sec, diags);
        if (sec.name == "dataset") {
            std::string path, mode = "pca";
            r.string("path", path);
            if (!path.empty()) cfg.dataset_path = path;
            r.string("label_column", cfg.schema.label_column);
            r.string("positive_label", cfg.schema.positive_label);
            r.string("feature_mode", mode);
            if (mode == "pca") cfg.options.feature_mode = FeatureStage::Mode::pca;
            else if (mode == "passthrough") cfg.options.feature_mode = FeatureStage::Mode::passthrough;
            else if (mode == "raw") cfg.options.feature_mode = FeatureStage::Mode::raw;
            else if (auto e = r.get("feature_mode")) r.error(*e, "feature_mode", "expected pca, passthrough or raw");
            r.string("encoded_prefix", cfg.options.encoded_prefix);
            if (auto e = r.get("raw_columns")) cfg.options.raw_columns = split_list(e->value);
            if (auto e = r.get("standardize")) cfg.options.standardize_columns = split_list(e->value);
        } else if (sec.name == "grid") {
            if (auto e = r.get("dims")) {
                saw_dims = true;
                if (auto d = parse_dims_list(e->value)) cfg.grid.dims_list = *d;
                else r.error(*e, "dims", "expected integers or ranges like 1-28");
            }
            r.string("metric", cfg.grid.metric_key);
            if (auto e = r.get("metric"); e && !is_metric_key(cfg.grid.metric_key))
                r.error(*e, "metric", "unknown metric '" + cfg.grid.metric_key + "'");
            r.number("top_k", cfg.grid.top_k);
            r.number("test_fraction", cfg.grid.test_fraction);
            r.number("cv_folds", cfg.grid.cv_folds);
            r.number("master_seed", cfg.grid.master_seed);
            r.boolean("ensembles", cfg.options.build_ensembles);
        } else if (sec.name == "run") {
            r.number("workers", cfg.options.workers);
            r.boolean("record_timing", cfg.options.record_timing);
        } else if (sec.name == "output") {
            std::string dir;
            r.string("dir", dir);
            if (!dir.empty()) cfg.output_dir = dir;
            if (auto e = r.get("formats")) {
                cfg.write_csv = cfg.write_json = false;
                for (const auto& f : split_list(e->value)) {
                    if (f == "csv") cfg.write_csv = true;
                    else if (f == "json") cfg.write_json = true;
                    else r.error(*e, "formats", "unknown format '" + f + "'");
                }
            }
        } else if (sec.name.rfind("sampler.", 0) == 0) {
            SamplerSpec s;
            std::string kind;
            r.string("kind", kind);
            try {
                s.kind = sampler_kind_from_string(kind);
            } catch (const ConfigError&) {
                err(diags, "line " + std::to_string(sec.line) + ": [" + sec.name + "] unknown or missing kind '" + kind + "'");
            }
            r.string("label", s.name);
            r.number("target_ratio", s.target_ratio);
            r.number("k_neighbors", s.k_neighbors);
            r.boolean("with_replacement", s.with_replacement);
            r.number("iht_folds", s.iht_folds);
            r.number("iht_trees", s.iht_trees);
            r.number("seed_salt", s.seed_salt);
            try {
                validate(s);
            } catch (const ConfigError& e) {
                err(diags, "line " + std::to_string(sec.line) + ": [" + sec.name + "] " + e.what());
            }
            cfg.grid.sampler_specs.push_back(std::move(s));
        } else if (sec.name.rfind("classifier.", 0) == 0) {
            ClassifierSpec c;
            std::string kind;
            r.string("kind", kind);
            bool kind_ok = true;
            try {
                c.kind = classifier_kind_from_string(kind);
            } catch (const ConfigError&) {
                kind_ok = false;
                err(diags, "line " + std::to_string(sec.line) + ": [" + sec.name + "] unknown or missing kind '" + kind + "'");
            }
            r.string("label", c.name);
            r.number("seed_salt", c.seed_salt);
            for (const auto& [key, e] : sec.entries) {
                if (key == "kind" || key == "label" || key == "seed_salt") continue;
                r.get(key);
                double v = 0;
                if (!parse_number(e.value, v)) {
                    r.error(e, key, "expected a number");
                    continue;
                }
                c.params[key] = v;
            }
            if (kind_ok) {
                try {
                    validate(c);
                } catch (const ConfigError& e) {
                    err(diags, "line " + std::to_string(sec.line) + ": [" + sec.name + "] " + e.what());
                }
            }
            cfg.grid.classifier_specs.push_back(std::move(c));
        } else {
            err(diags, "line " + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
            continue;
        }
        r.finish();
    }

    if (cfg.dataset_path.empty()) err(diags, "[dataset] path is required");
    else if (cfg.dataset_path.is_relative() && !base_dir.empty()) cfg.dataset_path = base_dir / cfg.dataset_path;
    if (!saw_dims) err(diags, "[grid] dims is required");
    if (cfg.grid.sampler_specs.empty()) err(diags, "no [sampler.*] sections");
    if (cfg.grid.classifier_specs.empty()) err(diags, "no [classifier.*] sections");
    if (cfg.options.workers < 1) err(diags, "[run] workers must be >= 1");
    if (cfg.grid.top_k < 1) err(diags, "[grid] top_k must be >= 1");
    if (!(cfg.grid.test_fraction > 0.0 && cfg.grid.test_fraction < 1.0))
        err(diags, "[grid] test_fraction must lie in (0, 1)");
    if (cfg.grid.cv_folds < 2) err(diags, "[grid] cv_folds must be >= 2");
    const auto grid_size = cfg.grid.dims_list.size() * cfg.grid.sampler_specs.size() * cfg.grid.classifier_specs.size();
    if (grid_size > 0 && cfg.grid.top_k > grid_size)
        err(diags, "[grid] top_k " + std::to_string(cfg.grid.top_k) + " exceeds grid size " + std::to_string(grid_size));
    for (auto d : cfg.grid.dims_list)
        if (d == 0) {
            err(diags, "[grid] dims entries must be >= 1");
            break;
        }
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
    return parsed;
}

ParsedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        ParsedConfig p;
        err(p.diagnostics, path.string() + ": cannot open config file");
        return p;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::vector<Diagnostic> check_against_dataset(const RunConfig& cfg) {
    std::vector<Diagnostic> diags;
    std::ifstream in(cfg.dataset_path);
    if (!in) {
        err(diags, "dataset '" + cfg.dataset_path.string() + "' not found");
        return diags;
    }
    std::string header_line;
    std::getline(in, header_line);
    if (trim(header_line).empty()) {
        err(diags, "dataset '" + cfg.dataset_path.string() + "' has no header row");
        return diags;
    }

    std::vector<std::string> names;
    std::string cur;
    bool quoted = false;
    for (char ch : header_line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            names.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    names.emplace_back(trim(cur));
    if (std::erase(names, cfg.schema.label_column) == 0) {
        err(diags, "label column '" + cfg.schema.label_column + "' not in dataset header");
        return diags;
    }

    std::size_t width = names.size();
    if (cfg.options.feature_mode == FeatureStage::Mode::passthrough) {
        Dataset probe;
        probe.feature_names = names;
        try {
            width = detect_encoded_layout(probe, cfg.options.encoded_prefix, cfg.options.raw_columns).encoded.size();
        } catch (const DataError& e) {
            err(diags, std::string("raw_columns: ") + e.what());
        }
        if (width == 0) err(diags, "passthrough: no columns named " + cfg.options.encoded_prefix + "<n>");
    }
    for (const auto& c : cfg.options.standardize_columns)
        if (c != "*" && std::find(names.begin(), names.end(), c) == names.end())
            err(diags, "standardize: unknown column '" + c + "'");

    auto dims = cfg.grid.dims_list;
    for (const auto& w : clamp_dims(dims, width)) diags.push_back({Diagnostic::Severity::warning, w});
    return diags;
}

std::vector<Diagnostic> validate_config_file(const std::filesystem::path& path) {
    auto parsed = load_config(path);
    auto diags = parsed.diagnostics;
    if (!parsed.config.dataset_path.empty()) {
        auto more = check_against_dataset(parsed.config);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    return diags;
}

}  // namespace imbsel
