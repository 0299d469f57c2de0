#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "imbsel/data_io.hpp"
#include "imbsel/matrix.hpp"

namespace imbsel {

/// Principal axes of a training set. Row i of `components` is the i-th
/// direction; rows are orthonormal and ordered by explained variance.
struct PcaModel {
    std::vector<double> mean;
    Matrix components;
    std::vector<double> explained_variance;
    std::vector<std::string> input_names;

    std::size_t width() const noexcept { return mean.size(); }
};

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // row i pairs with values[i]
    int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Stops once the
/// off-diagonal Frobenius norm drops below `rel_tol` times its initial value.
EigenResult jacobi_eigen(const Matrix& symmetric, double rel_tol = 1e-12, int max_sweeps = 100);

/// Fits on every row of `d` using the population covariance.
PcaModel pca_fit(const Dataset& d);

/// Projects onto the first `dims` components; output columns are named PC1..PCdims.
Dataset pca_transform(const PcaModel& m, const Dataset& d, std::size_t dims);

/// Maps component scores (any leading subset of components) back to input space.
Matrix pca_inverse_transform(const PcaModel& m, const Matrix& scores);

/// Column layout of a dataset that already carries PCA-encoded features.
struct EncodedLayout {
    std::vector<std::string> encoded;  // ordered V1, V2, ...
    std::vector<std::string> raw;      // extra columns kept at every dims
};

/// Finds columns named `<prefix><number>` and orders them numerically.
EncodedLayout detect_encoded_layout(const Dataset& d, const std::string& prefix,
                                    std::vector<std::string> raw_columns = {});

/// Keeps the first `dims` encoded columns followed by the layout's raw columns.
Dataset pca_passthrough_select(const Dataset& d, const EncodedLayout& layout, std::size_t dims);

}  // namespace imbsel
