#pragma once

#include <stdexcept>
#include <string>

namespace miri {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix/vector dimensions.
struct ShapeError : Error {
    using Error::Error;
};

/// Malformed input file (CSV, model checkpoint, ...).
struct ParseError : Error {
    using Error::Error;
};

/// Invalid run configuration or command usage.
struct ConfigError : Error {
    using Error::Error;
};

/// Data cannot be preprocessed (constant feature, fully missing column, ...).
struct PreprocessError : Error {
    using Error::Error;
};

/// Invalid or infeasible mask specification.
struct MaskSpecError : Error {
    using Error::Error;
};

/// Training diverged or produced non-finite values.
struct TrainingError : Error {
    using Error::Error;
};

/// ODE integration produced non-finite state.
struct SolverError : Error {
    using Error::Error;
};

/// Metric undefined for the given inputs.
struct MetricError : Error {
    using Error::Error;
};

/// Filesystem failure while reading or writing artifacts.
struct IoError : Error {
    using Error::Error;
};

}  // namespace miri
