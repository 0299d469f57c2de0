#pragma once

#include <stdexcept>
#include <string>

namespace imbsel {

/// Dataset ingestion or shape problem.
class DataError : public std::runtime_error {
public:
    enum class Kind {
        missing_file,
        empty_file,
        empty_dataset,
        missing_label_column,
        non_numeric_cell,
        non_finite_value,
        ragged_row,
        bad_label,
        unknown_column,
        shape_mismatch,
        insufficient_class,
    };

    DataError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Invalid configuration or hyperparameter.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or sampler could not be fitted on the given data.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace imbsel
