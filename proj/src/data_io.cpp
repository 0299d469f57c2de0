#include "imbsel/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "imbsel/error.hpp"
#include "imbsel/rng.hpp"

namespace imbsel {

std::size_t Dataset::positives() const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void Dataset::validate() const {
    if (features.rows() != labels.size())
        throw DataError(DataError::Kind::shape_mismatch,
                        source_tag + ": feature rows " + std::to_string(features.rows()) +
                            " != labels " + std::to_string(labels.size()));
    if (feature_names.size() != features.cols())
        throw DataError(DataError::Kind::shape_mismatch,
                        source_tag + ": feature name count does not match width");
    for (int y : labels)
        if (y != 0 && y != 1)
            throw DataError(DataError::Kind::bad_label, source_tag + ": label outside {0,1}");
    for (double v : features.data())
        if (!std::isfinite(v))
            throw DataError(DataError::Kind::non_finite_value, source_tag + ": non-finite feature");
}

long long round_half_away(double x) noexcept {
    return static_cast<long long>(x < 0 ? -std::floor(-x + 0.5) : std::floor(x + 0.5));
}

namespace {

// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

LoadResult parse_csv(std::string_view text, const CsvSchema& schema, const std::string& tag) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line))
        throw DataError(DataError::Kind::empty_file, tag + ": empty file (no header row)");

    auto header = split_record(line);
    for (auto& h : header) h = std::string(trim(h));
    const auto label_it = std::find(header.begin(), header.end(), schema.label_column);
    if (label_it == header.end())
        throw DataError(DataError::Kind::missing_label_column,
                        tag + ": label column '" + schema.label_column + "' not found in header");
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    LoadResult result;
    Dataset& d = result.data;
    d.source_tag = tag;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_col) d.feature_names.push_back(header[c]);

    const std::size_t width = d.feature_names.size();
    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::vector<double> row(width);
    while (next_line(line)) {
        auto fields = split_record(line);
        if (fields.size() != header.size())
            throw DataError(DataError::Kind::ragged_row,
                            tag + ": line " + std::to_string(line_no) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(header.size()));
        std::size_t out = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) continue;
            double v = 0.0;
            if (!parse_double(fields[c], v))
                throw DataError(DataError::Kind::non_numeric_cell,
                                tag + ": non-numeric cell at line " + std::to_string(line_no) +
                                    ", column '" + header[c] + "': '" + fields[c] + "'");
            if (!std::isfinite(v))
                throw DataError(DataError::Kind::non_finite_value,
                                tag + ": non-finite value at line " + std::to_string(line_no) +
                                    ", column '" + header[c] + "'");
            row[out++] = v;
        }
        values.insert(values.end(), row.begin(), row.end());
        raw_labels.emplace_back(trim(fields[label_col]));
    }

    if (raw_labels.empty())
        throw DataError(DataError::Kind::empty_dataset, tag + ": empty dataset (header only)");

    std::map<std::string, std::size_t> counts;
    for (const auto& l : raw_labels) ++counts[l];
    if (counts.size() > 2)
        throw DataError(DataError::Kind::bad_label,
                        tag + ": label column has " + std::to_string(counts.size()) +
                            " distinct values, expected a binary label");

    std::string positive = schema.positive_label;
    if (positive.empty()) {
        // Minority value becomes the positive class; ties go to the larger string.
        auto it = std::min_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
            return a.second < b.second || (a.second == b.second && a.first > b.first);
        });
        positive = it->first;
    } else if (!counts.contains(positive)) {
        // A single-class file whose class is not the positive one is allowed.
        if (counts.size() == 2)
            throw DataError(DataError::Kind::bad_label,
                            tag + ": positive label '" + positive + "' not present");
    }

    d.labels.reserve(raw_labels.size());
    for (const auto& l : raw_labels) d.labels.push_back(l == positive ? 1 : 0);
    d.features = Matrix(raw_labels.size(), width, std::move(values));

    if (d.positives() > d.negatives())
        result.warnings.push_back(tag + ": positive class '" + positive +
                                  "' is the majority; metrics treat label 1 as the minority");
    return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError(DataError::Kind::missing_file, path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema, path.string());
}

void write_csv(const std::filesystem::path& path, const Dataset& d,
               const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataError::Kind::missing_file, path.string() + ": cannot write");
    for (const auto& n : d.feature_names) out << n << ',';
    out << label_column << '\n';
    char buf[64];
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (double v : d.features.row(r)) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, end - buf);
            out << ',';
        }
        out << d.labels[r] << '\n';
    }
    if (!out) throw DataError(DataError::Kind::missing_file, path.string() + ": write failed");
}

std::size_t column_index(const Dataset& d, const std::string& name) {
    auto it = std::find(d.feature_names.begin(), d.feature_names.end(), name);
    if (it == d.feature_names.end())
        throw DataError(DataError::Kind::unknown_column, d.source_tag + ": unknown column '" + name + "'");
    return static_cast<std::size_t>(it - d.feature_names.begin());
}

StandardizationParams fit_standardizer(const Dataset& d, std::span<const std::string> columns) {
    StandardizationParams s;
    if (columns.empty()) return s;
    if (d.rows() == 0)
        throw DataError(DataError::Kind::empty_dataset, "fit_standardizer: no rows");
    for (const auto& name : columns) {
        const std::size_t c = column_index(d, name);
        // Two-pass population moments.
        double mean = 0.0;
        for (std::size_t r = 0; r < d.rows(); ++r) mean += d.features(r, c);
        mean /= static_cast<double>(d.rows());
        double var = 0.0;
        for (std::size_t r = 0; r < d.rows(); ++r) {
            const double t = d.features(r, c) - mean;
            var += t * t;
        }
        var /= static_cast<double>(d.rows());
        double sd = std::sqrt(var);
        if (!(sd > 0.0)) {
            sd = 1.0;
            s.constant_columns.push_back(name);
        }
        s.columns.push_back(name);
        s.mean.push_back(mean);
        s.stddev.push_back(sd);
    }
    return s;
}

Dataset apply_standardizer(const Dataset& d, const StandardizationParams& s) {
    if (s.mean.size() != s.columns.size() || s.stddev.size() != s.columns.size())
        throw DataError(DataError::Kind::shape_mismatch, "standardizer: inconsistent params");
    Dataset out = d;
    for (std::size_t k = 0; k < s.columns.size(); ++k) {
        auto it = std::find(d.feature_names.begin(), d.feature_names.end(), s.columns[k]);
        if (it == d.feature_names.end())
            throw DataError(DataError::Kind::shape_mismatch,
                            d.source_tag + ": standardizer column '" + s.columns[k] + "' missing");
        const auto c = static_cast<std::size_t>(it - d.feature_names.begin());
        for (std::size_t r = 0; r < out.rows(); ++r)
            out.features(r, c) = (out.features(r, c) - s.mean[k]) / s.stddev[k];
    }
    return out;
}

SplitIndices stratified_split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError(DataError::Kind::shape_mismatch, "test_fraction must lie in (0,1)");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < d.rows(); ++i) by_class[d.labels[i]].push_back(i);

    long long want[2];
    for (int c = 0; c < 2; ++c)
        want[c] = round_half_away(test_fraction * static_cast<double>(by_class[c].size()));
    // Residual from per-class rounding goes to the majority class.
    const long long total = round_half_away(test_fraction * static_cast<double>(d.rows()));
    const int major = by_class[0].size() >= by_class[1].size() ? 0 : 1;
    want[major] += total - (want[0] + want[1]);

    for (int c = 0; c < 2; ++c) {
        const auto n = static_cast<long long>(by_class[c].size());
        if (n < 2 || want[c] < 1 || want[c] > n - 1)
            throw DataError(DataError::Kind::insufficient_class,
                            "stratified_split: class " + std::to_string(c) + " has " +
                                std::to_string(n) + " rows, cannot place one on each side");
    }

    SplitIndices split;
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, {0x5B117ULL, static_cast<std::uint64_t>(c)}));
        auto members = by_class[c];
        shuffle(std::span(members), rng);
        const auto cut = static_cast<std::size_t>(want[c]);
        split.test_idx.insert(split.test_idx.end(), members.begin(), members.begin() + cut);
        split.train_idx.insert(split.train_idx.end(), members.begin() + cut, members.end());
    }
    std::sort(split.train_idx.begin(), split.train_idx.end());
    std::sort(split.test_idx.begin(), split.test_idx.end());
    return split;
}

std::vector<int> stratified_folds(std::span<const std::size_t> rows, std::span<const int> labels,
                                  int n_folds, std::uint64_t seed) {
    if (n_folds < 2) throw DataError(DataError::Kind::shape_mismatch, "n_folds must be >= 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < rows.size(); ++i) by_class[labels[rows[i]]].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < static_cast<std::size_t>(n_folds))
            throw DataError(DataError::Kind::insufficient_class,
                            "stratified_folds: class " + std::to_string(c) + " has " +
                                std::to_string(by_class[c].size()) + " rows, fewer than " +
                                std::to_string(n_folds) + " folds");

    // Deal positives first, then negatives, round-robin from where the
    // positives stopped so fold sizes stay within one of each other.
    std::vector<int> folds(rows.size(), -1);
    std::size_t cursor = 0;
    for (int c : {1, 0}) {
        Rng rng(derive_seed(seed, {0xF01DULL, static_cast<std::uint64_t>(c)}));
        auto members = by_class[c];
        shuffle(std::span(members), rng);
        for (std::size_t pos : members) folds[pos] = static_cast<int>(cursor++ % n_folds);
    }
    return folds;
}

Dataset subset(const Dataset& d, std::span<const std::size_t> idx) {
    Dataset out;
    out.features = take_rows(d.features, idx);
    out.labels.reserve(idx.size());
    for (auto i : idx) out.labels.push_back(d.labels[i]);
    out.feature_names = d.feature_names;
    out.source_tag = d.source_tag;
    return out;
}

Dataset select_columns(const Dataset& d, std::span<const std::string> columns) {
    std::vector<std::size_t> idx;
    idx.reserve(columns.size());
    for (const auto& c : columns) idx.push_back(column_index(d, c));
    Dataset out;
    out.features = take_cols(d.features, idx);
    out.labels = d.labels;
    out.feature_names.assign(columns.begin(), columns.end());
    out.source_tag = d.source_tag;
    return out;
}

std::uint64_t checksum(const Dataset& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    const std::uint64_t dims[2] = {d.features.rows(), d.features.cols()};
    mix(dims, sizeof dims);
    mix(d.features.data().data(), d.features.data().size() * sizeof(double));
    mix(d.labels.data(), d.labels.size() * sizeof(int));
    for (const auto& n : d.feature_names) mix(n.data(), n.size() + 1);
    return h;
}

}  // namespace imbsel
