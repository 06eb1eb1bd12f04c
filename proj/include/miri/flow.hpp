#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "miri/config.hpp"
#include "miri/dataset.hpp"
#include "miri/matrix.hpp"
#include "miri/mlp.hpp"
#include "miri/rng.hpp"

namespace miri {

/// One training batch for the conditional rectified flow. (x0, m0) rows are a
/// joint draw from the current state, x1 rows come from an independent
/// permutation of the same data, and x_tau is the straight-line interpolant.
struct FlowBatch {
    Matrix x0;
    Matrix m0;
    Matrix x1;
    std::vector<double> tau;  // per-example time in [0,1]
    Matrix x_tau;             // (1 - tau) * x0 + tau * x1, row-wise
    Matrix y;                 // x1 - x0
};

FlowBatch draw_flow_batch(const ImputationState& state, std::size_t batch_size, Rng& rng);

/// Conditioned network input layout, length 4d+1:
///   [ (1-m).*x_tau | m.*x0 | m.*x1 | m | tau ]
/// i.e. the interpolant restricted to unobserved coordinates, both endpoints
/// restricted to observed coordinates, the mask, and the time.
std::vector<double> velocity_input(const std::vector<double>& x_tau,
                                   const std::vector<double>& x0,
                                   const std::vector<double>& x1,
                                   const std::vector<double>& m, double tau);

/// Writes the same layout into `out` (length 4d+1) from raw row pointers.
void velocity_input_row(const double* x_tau, const double* x0, const double* x1,
                        const double* m, double tau, std::size_t d, double* out);

/// Mask-conditioned velocity network; input size 4d+1, output size d.
struct VelocityModel {
    MlpParams params;
    std::size_t dim = 0;

    static VelocityModel init(std::size_t dim, const std::vector<std::size_t>& hidden, Rng& rng);
};

/// Batched velocity evaluation for rows of z conditioned on x_cond and mask.
/// Both endpoint slots receive the observed values, as used at imputation
/// time.
Matrix velocity_at(const VelocityModel& model, const Matrix& z, const Matrix& x_cond,
                   const Matrix& mask, double tau);

/// Row-wise drift field: (z, x_cond, mask, tau) -> velocities, same shape as z.
using VelocityField =
    std::function<Matrix(const Matrix& z, const Matrix& x_cond, const Matrix& mask, double tau)>;

struct TrainResult {
    VelocityModel model;
    std::vector<double> losses;  // one entry per optimizer step
};

/// Trains a fresh velocity network (or continues from `warm`) for
/// cfg.train_steps batches of cfg.batch_size drawn from `state`, minimizing
/// the mean squared velocity residual.
TrainResult train_velocity(const ImputationState& state, const MiriConfig& cfg, Rng& rng,
                           const VelocityModel* warm = nullptr);

/// Mask-projected forward Euler over tau in (0, 1]: at step k of N,
///   z <- z + (1/N) * (1-m) .* field(z, m.*x_init, m, k/N).
/// Observed coordinates are never touched; rows without missing entries are
/// skipped entirely. Throws SolverError on non-finite state.
Matrix euler_solve(const VelocityField& field, const Matrix& x_init, const Matrix& mask,
                   std::size_t steps);
Matrix euler_solve(const VelocityModel& model, const Matrix& x_init, const Matrix& mask,
                   std::size_t steps);

/// One imputation pass: integrates the ODE from the current state (missing
/// coordinates carry the previous imputations) and writes the terminal values
/// into the missing coordinates. Observed entries stay pinned bit-exactly.
ImputationState impute_once(const ImputationState& state, const VelocityModel& model,
                            std::size_t steps);

}  // namespace miri
