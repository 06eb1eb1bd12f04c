#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "miri/matrix.hpp"

namespace miri {

/// Root mean square error over cells with mask = 0 only.
/// Throws MetricError when no cell is masked.
double rmse_masked(const Matrix& imputed, const Matrix& truth, const Matrix& mask);

/// Mean absolute error over cells with mask = 0 only.
double mae_masked(const Matrix& imputed, const Matrix& truth, const Matrix& mask);

/// RMSE / MAE averaged over every cell of the matrix. Pinned observed cells
/// contribute zero, so these weight the masked errors by the missing rate.
double rmse_all(const Matrix& imputed, const Matrix& truth);
double mae_all(const Matrix& imputed, const Matrix& truth);

/// Median of pairwise Euclidean distances over the pooled sample (a and b
/// stacked). Pools larger than 4096 points are strided down deterministically.
double median_pairwise_distance(const Matrix& a, const Matrix& b);

/// Biased (V-statistic) squared MMD with Gaussian kernel
/// k(x,y) = exp(-||x-y||^2 / (2 h^2)), square-rooted. `bandwidth` defaults to
/// the median heuristic; returns 0 when the pooled sample is degenerate.
double mmd_rbf(const Matrix& a, const Matrix& b, std::optional<double> bandwidth = std::nullopt);

/// Histogram plugin estimate of I(X; M) in nats. M is the discrete variable
/// over observed mask patterns; X is binned per dimension on an equal-width
/// grid over the pooled range. Requires d <= 4 and bins >= 2; clipped at 0.
double mi_plugin(const Matrix& x, const Matrix& mask, std::size_t bins = 8);

/// Largest data dimension for which the plugin MI diagnostic is computed.
inline constexpr std::size_t kMiMaxDims = 4;

/// Flat evaluation record; serializes as one "key value" line per metric.
struct MetricsReport {
    double rmse = 0.0;          // whole-matrix convention
    double mae = 0.0;           // whole-matrix convention
    double rmse_missing = 0.0;  // masked cells only
    double mae_missing = 0.0;   // masked cells only
    double mmd = 0.0;
    std::optional<double> mi;
    std::size_t cells_evaluated = 0;
    std::size_t rows = 0;

    std::string to_text() const;
};

}  // namespace miri
