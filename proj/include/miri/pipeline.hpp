#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miri/config.hpp"
#include "miri/masking.hpp"
#include "miri/metrics.hpp"
#include "miri/miri.hpp"
#include "miri/synth.hpp"

namespace miri {

/// Evaluates an imputation against ground truth.
/// rmse/mae average over every cell of the matrix in the original data
/// space (pinned observed cells contribute zero error); rmse_missing /
/// mae_missing restrict to originally masked cells. MMD compares the full
/// matrices after per-feature standardization by the truth's moments, with
/// the median-heuristic bandwidth. MI is reported for d <= 4.
MetricsReport evaluate_imputation(const Matrix& imputed, const Matrix& truth,
                                  const Matrix& mask);

struct ToyRunArtifacts {
    MetricsReport metrics;
    DiagnosticsTrace trace;
    std::string config_hash;
};

/// One full benchmark run: sample the two-cluster mixture (6000 points),
/// drop 30% of entries completely at random, impute with `cfg`, evaluate.
/// Data/mask/model seeds are derived from `seed` deterministically. When the
/// out_* paths are non-empty the artifacts are written there.
ToyRunArtifacts run_toy_seed(std::uint64_t seed, const MiriConfig& cfg,
                             const std::string& out_imputed = "",
                             const std::string& out_trace = "");

/// Per-metric mean and standard deviation (population) over runs.
struct SummaryStat {
    double mean = 0.0;
    double stddev = 0.0;
};
SummaryStat summarize(const std::vector<double>& values);

/// Runs `seeds` toy runs, possibly concurrently (thread count from the
/// MIRI_THREADS environment variable, default 1). Results are ordered by
/// seed and independent of the thread count.
std::vector<ToyRunArtifacts> run_toy_seeds(const std::vector<std::uint64_t>& seeds,
                                           const MiriConfig& cfg,
                                           const std::string& out_dir = "");

inline constexpr std::size_t kToySampleCount = 6000;
inline constexpr double kToyMissingRate = 0.3;

}  // namespace miri
