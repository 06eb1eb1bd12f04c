#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "miri/config.hpp"
#include "miri/dataset.hpp"
#include "miri/flow.hpp"
#include "miri/matrix.hpp"

namespace miri {

/// Per-iteration diagnostics. Metrics that need ground truth hold NaN when it
/// is unavailable; mi holds NaN when the dimension is too large for the
/// plugin estimator.
struct IterationRecord {
    std::size_t iteration = 0;
    double loss_first = 0.0;
    double loss_final = 0.0;
    double loss_mean = 0.0;
    double rmse = std::numeric_limits<double>::quiet_NaN();  // masked cells, standardized space
    double mae = std::numeric_limits<double>::quiet_NaN();   // masked cells, standardized space
    double mmd = std::numeric_limits<double>::quiet_NaN();
    double mi = std::numeric_limits<double>::quiet_NaN();
};

struct DiagnosticsTrace {
    std::vector<IterationRecord> records;

    /// One row per iteration, one column per metric; NaN prints as empty.
    std::string to_csv(const std::string& header_comment) const;
};

struct MiriResult {
    /// Final state in the original data space. Observed entries equal the
    /// input observations bit-exactly.
    ImputationState state;
    DiagnosticsTrace trace;
    Standardizer standardizer;
};

/// Called after every imputation pass with the standardized-space state.
using IterationObserver = std::function<void(const ImputationState&)>;

/// The full loop: standardize, initial-impute, then T rounds of velocity
/// training and mask-projected re-imputation, recording diagnostics per
/// iteration (against ground_truth when given). Returns the destandardized
/// final state.
MiriResult run_miri(const MaskedDataset& ds, const MiriConfig& cfg,
                    const Matrix* ground_truth = nullptr,
                    const IterationObserver& observer = {});

/// k independent runs differing only in seed (seed + 0, seed + 1, ...).
std::vector<MiriResult> run_multiple(const MaskedDataset& ds, const MiriConfig& cfg,
                                     std::size_t k, const Matrix* ground_truth = nullptr);

}  // namespace miri
