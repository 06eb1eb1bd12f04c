#pragma once

// Test-only oracles, written independently of the library's compute kernels
// so they can vouch for them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "miri/matrix.hpp"
#include "miri/mlp.hpp"

namespace testutil {

/// Layer-by-layer scalar re-evaluation of the network, no shared kernels.
inline miri::Matrix naive_mlp_forward(const miri::MlpParams& p, const miri::Matrix& batch) {
    using miri::Matrix;
    std::vector<double> cur, next;
    Matrix out(batch.rows(), p.output_size());
    for (std::size_t r = 0; r < batch.rows(); ++r) {
        cur.assign(batch.row(r), batch.row(r) + batch.cols());
        for (std::size_t l = 0; l < p.layer_count(); ++l) {
            const Matrix& w = p.weights[l];
            next.assign(w.cols(), 0.0);
            for (std::size_t j = 0; j < w.cols(); ++j) {
                double z = p.biases[l][j];
                for (std::size_t i = 0; i < w.rows(); ++i) z += cur[i] * w(i, j);
                if (l + 1 < p.layer_count()) {
                    if (p.activation == miri::Activation::Silu)
                        z = z / (1.0 + std::exp(-z));
                    else
                        z = std::tanh(z);
                }
                next[j] = z;
            }
            cur = next;
        }
        for (std::size_t j = 0; j < p.output_size(); ++j) out(r, j) = cur[j];
    }
    return out;
}

inline double loss_of(const miri::MlpParams& p, const miri::Matrix& batch,
                      const miri::Matrix& targets) {
    const miri::Matrix v = naive_mlp_forward(p, batch);
    double loss = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            const double r = targets(i, j) - v(i, j);
            loss += r * r;
        }
    return loss / static_cast<double>(v.rows());
}

struct GradCheckResult {
    double worst_rel = 0.0;
    std::size_t checked = 0;
};

/// Central finite differences on every parameter coordinate against the
/// analytic gradients; relative error uses |analytic| + 1e-8 in the
/// denominator.
inline GradCheckResult gradcheck_all(const miri::MlpParams& params, const miri::Matrix& batch,
                                     const miri::Matrix& targets, double h = 1e-5) {
    const miri::LossGrad lg = miri::mlp_loss_grad(params, batch, targets);
    GradCheckResult res;
    miri::MlpParams mutable_params = params;
    auto probe = [&](double* coord, double analytic) {
        const double saved = *coord;
        *coord = saved + h;
        const double up = loss_of(mutable_params, batch, targets);
        *coord = saved - h;
        const double down = loss_of(mutable_params, batch, targets);
        *coord = saved;
        const double fd = (up - down) / (2.0 * h);
        const double rel = std::abs(analytic - fd) / (std::abs(analytic) + 1e-8);
        if (rel > res.worst_rel) res.worst_rel = rel;
        ++res.checked;
    };
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        for (std::size_t idx = 0; idx < params.weights[l].size(); ++idx)
            probe(mutable_params.weights[l].data() + idx, lg.grads.weights[l].data()[idx]);
        for (std::size_t idx = 0; idx < params.biases[l].size(); ++idx)
            probe(mutable_params.biases[l].data() + idx, lg.grads.biases[l].data()[idx]);
    }
    return res;
}

/// Fully expanded kernel double sum, quadratic and literal.
inline double brute_force_mmd(const miri::Matrix& a, const miri::Matrix& b, double bandwidth) {
    auto k = [&](const double* x, const double* y, std::size_t d) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
        return std::exp(-s / (2.0 * bandwidth * bandwidth));
    };
    const std::size_t na = a.rows(), nb = b.rows(), d = a.cols();
    double kaa = 0.0, kbb = 0.0, kab = 0.0;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) kaa += k(a.row(i), a.row(j), d);
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < nb; ++j) kbb += k(b.row(i), b.row(j), d);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) kab += k(a.row(i), b.row(j), d);
    const double mmd2 = kaa / double(na * na) + kbb / double(nb * nb) - 2.0 * kab / double(na * nb);
    return std::sqrt(std::max(0.0, mmd2));
}

/// Exact median of all pooled pairwise distances (for small samples).
inline double brute_force_median_distance(const miri::Matrix& a, const miri::Matrix& b) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < a.rows(); ++i)
        pts.emplace_back(a.row(i), a.row(i) + a.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
        pts.emplace_back(b.row(i), b.row(i) + b.cols());
    std::vector<double> dists;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < pts[i].size(); ++c)
                s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
            dists.push_back(std::sqrt(s));
        }
    std::sort(dists.begin(), dists.end());
    return dists.empty() ? 0.0 : dists[dists.size() / 2];
}

}  // namespace testutil
