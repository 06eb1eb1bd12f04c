#include "miri/metrics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "miri/errors.hpp"

namespace miri {

namespace {

void check_triple(const Matrix& imputed, const Matrix& truth, const Matrix& mask) {
    if (!imputed.same_shape(truth) || !imputed.same_shape(mask))
        throw ShapeError("masked metric: imputed, truth and mask shapes must match");
}

}  // namespace

double rmse_masked(const Matrix& imputed, const Matrix& truth, const Matrix& mask) {
    check_triple(imputed, truth, mask);
    double ss = 0.0;
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
        if (mask.data()[idx] == 0.0) {
            const double e = imputed.data()[idx] - truth.data()[idx];
            ss += e * e;
            ++count;
        }
    }
    if (count == 0) throw MetricError("rmse_masked: no masked cells");
    return std::sqrt(ss / static_cast<double>(count));
}

double mae_masked(const Matrix& imputed, const Matrix& truth, const Matrix& mask) {
    check_triple(imputed, truth, mask);
    double sa = 0.0;
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
        if (mask.data()[idx] == 0.0) {
            sa += std::abs(imputed.data()[idx] - truth.data()[idx]);
            ++count;
        }
    }
    if (count == 0) throw MetricError("mae_masked: no masked cells");
    return sa / static_cast<double>(count);
}

double rmse_all(const Matrix& imputed, const Matrix& truth) {
    if (!imputed.same_shape(truth)) throw ShapeError("rmse_all: shape mismatch");
    if (imputed.size() == 0) throw MetricError("rmse_all: empty matrices");
    double ss = 0.0;
    for (std::size_t idx = 0; idx < imputed.size(); ++idx) {
        const double e = imputed.data()[idx] - truth.data()[idx];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(imputed.size()));
}

double mae_all(const Matrix& imputed, const Matrix& truth) {
    if (!imputed.same_shape(truth)) throw ShapeError("mae_all: shape mismatch");
    if (imputed.size() == 0) throw MetricError("mae_all: empty matrices");
    double sa = 0.0;
    for (std::size_t idx = 0; idx < imputed.size(); ++idx)
        sa += std::abs(imputed.data()[idx] - truth.data()[idx]);
    return sa / static_cast<double>(imputed.size());
}

namespace {

constexpr std::size_t kMedianPoolCap = 4096;

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

}  // namespace

double median_pairwise_distance(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("median_pairwise_distance: column mismatch");
    const std::size_t d = a.cols();
    const std::size_t total = a.rows() + b.rows();

    // Gather pooled row pointers, striding down when the pool is large.
    std::vector<const double*> pts;
    if (total <= kMedianPoolCap) {
        pts.reserve(total);
        for (std::size_t i = 0; i < a.rows(); ++i) pts.push_back(a.row(i));
        for (std::size_t i = 0; i < b.rows(); ++i) pts.push_back(b.row(i));
    } else {
        const std::size_t stride = (total + kMedianPoolCap - 1) / kMedianPoolCap;
        for (std::size_t i = 0; i < total; i += stride) {
            pts.push_back(i < a.rows() ? a.row(i) : b.row(i - a.rows()));
        }
    }

    std::vector<double> dists;
    dists.reserve(pts.size() * (pts.size() - 1) / 2);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            dists.push_back(sq_dist(pts[i], pts[j], d));
    if (dists.empty()) return 0.0;

    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    return std::sqrt(dists[mid]);
}

double mmd_rbf(const Matrix& a, const Matrix& b, std::optional<double> bandwidth) {
    if (a.cols() != b.cols()) throw ShapeError("mmd_rbf: column mismatch");
    if (a.rows() < 2 || b.rows() < 2) throw MetricError("mmd_rbf: need at least 2 rows per sample");

    const double h = bandwidth ? *bandwidth : median_pairwise_distance(a, b);
    if (!(h > 0.0)) return 0.0;  // degenerate pooled sample
    const double gamma = 1.0 / (2.0 * h * h);

    const std::size_t na = a.rows(), nb = b.rows(), d = a.cols();

    // Self terms use symmetry: diagonal contributes exp(0) = 1 per row.
    auto self_sum = [&](const Matrix& x) {
        const std::size_t n = x.rows();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x.row(i);
            for (std::size_t j = i + 1; j < n; ++j)
                s += std::exp(-gamma * sq_dist(xi, x.row(j), d));
        }
        return 2.0 * s + static_cast<double>(n);
    };

    double cross = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const double* ai = a.row(i);
        for (std::size_t j = 0; j < nb; ++j)
            cross += std::exp(-gamma * sq_dist(ai, b.row(j), d));
    }

    const double taa = self_sum(a) / (static_cast<double>(na) * na);
    const double tbb = self_sum(b) / (static_cast<double>(nb) * nb);
    const double mmd2 = taa + tbb - 2.0 * cross / (static_cast<double>(na) * nb);
    // The V-statistic is non-negative; residue below the rounding resolution
    // of the cancellation is indistinguishable from zero.
    const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * (taa + tbb);
    if (mmd2 < resolution) return 0.0;
    return std::sqrt(mmd2);
}

double mi_plugin(const Matrix& x, const Matrix& mask, std::size_t bins) {
    if (!x.same_shape(mask)) throw ShapeError("mi_plugin: shape mismatch");
    const std::size_t n = x.rows(), d = x.cols();
    if (n == 0) throw MetricError("mi_plugin: empty input");
    if (bins < 2) throw MetricError("mi_plugin: need at least 2 bins");
    if (d > kMiMaxDims)
        throw MetricError("mi_plugin: disabled for d > " + std::to_string(kMiMaxDims));

    // Per-dimension equal-width grid over the pooled range.
    std::vector<double> lo(d), width(d);
    for (std::size_t j = 0; j < d; ++j) {
        double mn = x(0, j), mx = x(0, j);
        for (std::size_t i = 1; i < n; ++i) {
            mn = std::min(mn, x(i, j));
            mx = std::max(mx, x(i, j));
        }
        lo[j] = mn;
        width[j] = (mx - mn) / static_cast<double>(bins);
    }

    std::size_t n_cells = 1;
    for (std::size_t j = 0; j < d; ++j) n_cells *= bins;

    // Mask patterns as small integers.
    std::unordered_map<std::uint32_t, std::size_t> pattern_ids;
    std::vector<std::size_t> row_pattern(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t key = 0;
        for (std::size_t j = 0; j < d; ++j)
            if (mask(i, j) == 1.0) key |= (1u << j);
        auto [it, inserted] = pattern_ids.try_emplace(key, pattern_ids.size());
        row_pattern[i] = it->second;
    }
    const std::size_t n_patterns = pattern_ids.size();

    std::vector<double> joint(n_patterns * n_cells, 0.0);
    std::vector<double> p_cell(n_cells, 0.0);
    std::vector<double> p_pattern(n_patterns, 0.0);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = 0;
        for (std::size_t j = 0; j < d; ++j) {
            std::size_t bj = 0;
            if (width[j] > 0.0) {
                bj = static_cast<std::size_t>((x(i, j) - lo[j]) / width[j]);
                if (bj >= bins) bj = bins - 1;
            }
            cell = cell * bins + bj;
        }
        joint[row_pattern[i] * n_cells + cell] += w;
        p_cell[cell] += w;
        p_pattern[row_pattern[i]] += w;
    }

    double mi = 0.0;
    for (std::size_t p = 0; p < n_patterns; ++p) {
        for (std::size_t c = 0; c < n_cells; ++c) {
            const double pj = joint[p * n_cells + c];
            if (pj > 0.0) mi += pj * std::log(pj / (p_pattern[p] * p_cell[c]));
        }
    }
    return std::max(0.0, mi);
}

std::string MetricsReport::to_text() const {
    char buf[64];
    std::ostringstream out;
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " " << buf << "\n";
    };
    line("rmse", rmse);
    line("mae", mae);
    line("rmse_missing", rmse_missing);
    line("mae_missing", mae_missing);
    line("mmd", mmd);
    if (mi) line("mi", *mi);
    out << "cells_evaluated " << cells_evaluated << "\n";
    out << "rows " << rows << "\n";
    return out.str();
}

}  // namespace miri
