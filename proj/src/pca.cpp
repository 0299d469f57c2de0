#include "imbsel/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbsel/error.hpp"

namespace imbsel {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigenResult jacobi_eigen(const Matrix& symmetric, double rel_tol, int max_sweeps) {
    const std::size_t n = symmetric.rows();
    Matrix a = symmetric;
    Matrix v(n, n);  // columns accumulate eigenvectors
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const double initial = off_diagonal_norm(a);
    const double stop = rel_tol * initial;
    int sweep = 0;
    while (initial > 0.0 && sweep < max_sweeps && off_diagonal_norm(a) >= stop) {
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Rotation angle that zeroes a(p,q); stable tangent form.
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenResult r;
    r.sweeps = sweep;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        r.values[i] = a(order[i], order[i]);
        for (std::size_t k = 0; k < n; ++k) r.vectors(i, k) = v(k, order[i]);
    }
    return r;
}

PcaModel pca_fit(const Dataset& d) {
    const std::size_t n = d.rows();
    const std::size_t p = d.width();
    if (n < 2 || p < 1) throw FitError("pca_fit: need at least 2 rows and 1 column");

    PcaModel m;
    m.input_names = d.feature_names;
    m.mean.assign(p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = d.features.row(r);
        for (std::size_t c = 0; c < p; ++c) m.mean[c] += row[c];
    }
    for (auto& v : m.mean) v /= static_cast<double>(n);

    Matrix cov(p, p);
    std::vector<double> centered(p);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = d.features.row(r);
        for (std::size_t c = 0; c < p; ++c) centered[c] = row[c] - m.mean[c];
        for (std::size_t i = 0; i < p; ++i) {
            const double ci = centered[i];
            for (std::size_t j = i; j < p; ++j) cov(i, j) += ci * centered[j];
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            cov(i, j) /= static_cast<double>(n);
            cov(j, i) = cov(i, j);
        }

    auto eig = jacobi_eigen(cov);
    m.components = std::move(eig.vectors);
    m.explained_variance.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        // Round-off can leave tiny negative values on rank-deficient input.
        m.explained_variance[i] = std::max(0.0, eig.values[i]);
        auto comp = m.components.row(i);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < p; ++k)
            if (std::abs(comp[k]) > std::abs(comp[arg])) arg = k;
        if (comp[arg] < 0)
            for (auto& x : comp) x = -x;
    }
    return m;
}

Dataset pca_transform(const PcaModel& m, const Dataset& d, std::size_t dims) {
    if (d.width() != m.width())
        throw DataError(DataError::Kind::shape_mismatch,
                        "pca_transform: dataset width " + std::to_string(d.width()) +
                            " != model width " + std::to_string(m.width()));
    if (dims < 1 || dims > m.width())
        throw ConfigError("pca_transform: dims " + std::to_string(dims) + " outside [1, " +
                          std::to_string(m.width()) + "]");
    Dataset out;
    out.labels = d.labels;
    out.source_tag = d.source_tag;
    out.features = Matrix(d.rows(), dims);
    for (std::size_t k = 0; k < dims; ++k) out.feature_names.push_back("PC" + std::to_string(k + 1));
    std::vector<double> centered(m.width());
    for (std::size_t r = 0; r < d.rows(); ++r) {
        auto row = d.features.row(r);
        for (std::size_t c = 0; c < m.width(); ++c) centered[c] = row[c] - m.mean[c];
        for (std::size_t k = 0; k < dims; ++k) out.features(r, k) = dot(centered, m.components.row(k));
    }
    return out;
}

Matrix pca_inverse_transform(const PcaModel& m, const Matrix& scores) {
    if (scores.cols() > m.width())
        throw DataError(DataError::Kind::shape_mismatch, "pca_inverse_transform: too many columns");
    Matrix out(scores.rows(), m.width());
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        auto dst = out.row(r);
        std::copy(m.mean.begin(), m.mean.end(), dst.begin());
        for (std::size_t k = 0; k < scores.cols(); ++k) {
            const double s = scores(r, k);
            auto comp = m.components.row(k);
            for (std::size_t c = 0; c < m.width(); ++c) dst[c] += s * comp[c];
        }
    }
    return out;
}

EncodedLayout detect_encoded_layout(const Dataset& d, const std::string& prefix,
                                    std::vector<std::string> raw_columns) {
    std::vector<std::pair<long, std::string>> found;
    for (const auto& name : d.feature_names) {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
        const auto digits = name.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            continue;
        found.emplace_back(std::stol(digits), name);
    }
    std::sort(found.begin(), found.end());
    EncodedLayout layout;
    for (auto& [num, name] : found) layout.encoded.push_back(name);
    for (const auto& r : raw_columns) column_index(d, r);
    layout.raw = std::move(raw_columns);
    return layout;
}

Dataset pca_passthrough_select(const Dataset& d, const EncodedLayout& layout, std::size_t dims) {
    if (dims < 1 || dims > layout.encoded.size())
        throw ConfigError("pca_passthrough_select: dims " + std::to_string(dims) +
                          " outside [1, " + std::to_string(layout.encoded.size()) + "]");
    std::vector<std::string> cols(layout.encoded.begin(),
                                  layout.encoded.begin() + static_cast<std::ptrdiff_t>(dims));
    cols.insert(cols.end(), layout.raw.begin(), layout.raw.end());
    return select_columns(d, cols);
}

}  // namespace imbsel
