#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "miri/matrix.hpp"
#include "miri/rng.hpp"

namespace miri {

/// Observed values plus binary missingness mask. `raw` holds NaN wherever
/// mask = 0; the mask is the source of truth for missingness.
struct MaskedDataset {
    Matrix raw;
    Matrix mask;  // 1 = observed, 0 = missing
    std::vector<std::string> feature_names;  // empty when the file had no header

    std::size_t n_rows() const { return raw.rows(); }
    std::size_t n_cols() const { return raw.cols(); }
    std::size_t observed_count() const;
    std::size_t missing_count() const { return raw.size() - observed_count(); }

    /// Throws on violated invariants (mask not 0/1, non-finite observed cell,
    /// shape mismatch, empty data).
    void validate() const;
};

/// Per-feature affine transform fitted on observed entries only.
/// Population-std convention: std over k values divides by k.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    Matrix transform(const Matrix& x) const;
    Matrix inverse(const Matrix& x) const;
    double transform_cell(double v, std::size_t feature) const {
        return (v - mean[feature]) / stddev[feature];
    }
};

/// Fully completed data matrix at some iteration, plus the immutable mask and
/// the pinned observed values. Observed coordinates of `x` must equal the
/// pinned values bit-exactly at all times.
struct ImputationState {
    Matrix x;
    Matrix mask;
    Matrix pinned;  // observed values where mask = 1, zero elsewhere
    std::size_t iteration = 0;
};

/// True iff x .* mask equals pinned .* mask bit-exactly.
bool pinning_holds(const ImputationState& state);

enum class InitStrategy {
    Normal,   // iid N(0,1)
    Uniform,  // iid U(0,1)
    Mean,     // per-feature observed mean
};

InitStrategy parse_init_strategy(const std::string& name);
std::string to_string(InitStrategy s);

/// Reads a rectangular numeric CSV. Empty fields and `missing_token` mark
/// missing cells. Lines starting with '#' are comments. A first row whose
/// fields are all non-numeric becomes the header.
MaskedDataset load_csv(const std::string& path, const std::string& missing_token = "NaN");

/// Writes values (with `missing_token` where mask = 0 when a mask is given)
/// using round-trip precision. `header_comment`, when non-empty, is written
/// first as a '#' line. Writes are atomic (temp file + rename).
void write_csv(const std::string& path, const Matrix& values, const Matrix* mask,
               const std::vector<std::string>& feature_names, const std::string& header_comment,
               const std::string& missing_token = "NaN");

/// Writes a 0/1 mask matrix in the same CSV layout.
void write_mask_csv(const std::string& path, const Matrix& mask,
                    const std::vector<std::string>& feature_names,
                    const std::string& header_comment);

/// Rescales every feature to observed mean 0 and std 1. Throws
/// PreprocessError (naming the feature) when a feature has fewer than two
/// observed entries or zero spread.
std::pair<MaskedDataset, Standardizer> standardize(const MaskedDataset& ds);

/// Fills missing cells per strategy, copies observed cells verbatim and pins
/// them. iteration starts at 0.
ImputationState initial_impute(const MaskedDataset& ds, InitStrategy strategy, Rng& rng);

}  // namespace miri
