#include "miri/flow.hpp"

#include <cmath>
#include <string>

#include "miri/errors.hpp"

namespace miri {

FlowBatch draw_flow_batch(const ImputationState& state, std::size_t batch_size, Rng& rng) {
    const std::size_t n = state.x.rows(), d = state.x.cols();
    if (batch_size > n)
        throw ShapeError("draw_flow_batch: batch size " + std::to_string(batch_size) +
                         " exceeds row count " + std::to_string(n));

    FlowBatch batch;
    batch.x0 = Matrix(batch_size, d);
    batch.m0 = Matrix(batch_size, d);
    batch.x1 = Matrix(batch_size, d);
    batch.x_tau = Matrix(batch_size, d);
    batch.y = Matrix(batch_size, d);
    batch.tau.resize(batch_size);

    // Joint draw of (x0, m0); x1 from a fresh permutation of the data.
    const auto perm = rng.permutation(n);
    for (std::size_t b = 0; b < batch_size; ++b) {
        const std::size_t i0 = static_cast<std::size_t>(rng.below(n));
        const std::size_t i1 = perm[b];
        const double t = rng.uniform();
        batch.tau[b] = t;
        const double* x0 = state.x.row(i0);
        const double* m0 = state.mask.row(i0);
        const double* x1 = state.x.row(i1);
        double* bx0 = batch.x0.row(b);
        double* bm0 = batch.m0.row(b);
        double* bx1 = batch.x1.row(b);
        double* bxt = batch.x_tau.row(b);
        double* by = batch.y.row(b);
        for (std::size_t j = 0; j < d; ++j) {
            bx0[j] = x0[j];
            bm0[j] = m0[j];
            bx1[j] = x1[j];
            bxt[j] = (1.0 - t) * x0[j] + t * x1[j];
            by[j] = x1[j] - x0[j];
        }
    }
    return batch;
}

void velocity_input_row(const double* x_tau, const double* x0, const double* x1,
                        const double* m, double tau, std::size_t d, double* out) {
    for (std::size_t j = 0; j < d; ++j) out[j] = (1.0 - m[j]) * x_tau[j];
    for (std::size_t j = 0; j < d; ++j) out[d + j] = m[j] * x0[j];
    for (std::size_t j = 0; j < d; ++j) out[2 * d + j] = m[j] * x1[j];
    for (std::size_t j = 0; j < d; ++j) out[3 * d + j] = m[j];
    out[4 * d] = tau;
}

std::vector<double> velocity_input(const std::vector<double>& x_tau,
                                   const std::vector<double>& x0,
                                   const std::vector<double>& x1,
                                   const std::vector<double>& m, double tau) {
    const std::size_t d = x_tau.size();
    if (x0.size() != d || x1.size() != d || m.size() != d)
        throw ShapeError("velocity_input: vector lengths differ");
    std::vector<double> out(4 * d + 1);
    velocity_input_row(x_tau.data(), x0.data(), x1.data(), m.data(), tau, d, out.data());
    return out;
}

VelocityModel VelocityModel::init(std::size_t dim, const std::vector<std::size_t>& hidden,
                                  Rng& rng) {
    VelocityModel model;
    model.dim = dim;
    MlpShape shape;
    shape.input = 4 * dim + 1;
    shape.hidden = hidden;
    shape.output = dim;
    model.params = MlpParams::init(shape, rng);
    return model;
}

Matrix velocity_at(const VelocityModel& model, const Matrix& z, const Matrix& x_cond,
                   const Matrix& mask, double tau) {
    const std::size_t n = z.rows(), d = z.cols();
    if (!z.same_shape(x_cond) || !z.same_shape(mask))
        throw ShapeError("velocity_at: shape mismatch");
    Matrix inputs(n, 4 * d + 1);
    for (std::size_t i = 0; i < n; ++i) {
        velocity_input_row(z.row(i), x_cond.row(i), x_cond.row(i), mask.row(i), tau, d,
                           inputs.row(i));
    }
    return mlp_forward(model.params, inputs);
}

TrainResult train_velocity(const ImputationState& state, const MiriConfig& cfg, Rng& rng,
                           const VelocityModel* warm) {
    const std::size_t n = state.x.rows(), d = state.x.cols();
    cfg.validate(n);
    if (!state.x.all_finite())
        throw TrainingError("train_velocity: state contains non-finite values");

    TrainResult result;
    if (warm) {
        if (warm->dim != d) throw ShapeError("train_velocity: warm-start dimension mismatch");
        result.model = *warm;
    } else {
        result.model = VelocityModel::init(d, cfg.hidden, rng);
    }
    OptimizerState opt = OptimizerState::create(result.model.params, cfg.learning_rate);
    result.losses.reserve(cfg.train_steps);

    const std::size_t in_width = 4 * d + 1;
    Matrix inputs(cfg.batch_size, in_width);
    for (std::size_t step = 1; step <= cfg.train_steps; ++step) {
        const FlowBatch batch = draw_flow_batch(state, cfg.batch_size, rng);
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
            velocity_input_row(batch.x_tau.row(b), batch.x0.row(b), batch.x1.row(b),
                               batch.m0.row(b), batch.tau[b], d, inputs.row(b));
        }
        LossGrad lg = mlp_loss_grad(result.model.params, inputs, batch.y);
        if (!std::isfinite(lg.loss))
            throw TrainingError("train_velocity: non-finite loss at step " +
                                std::to_string(step));
        adam_step(result.model.params, lg.grads, opt);
        result.losses.push_back(lg.loss);
    }
    return result;
}

Matrix euler_solve(const VelocityField& field, const Matrix& x_init, const Matrix& mask,
                   std::size_t steps) {
    if (!x_init.same_shape(mask)) throw ShapeError("euler_solve: shape mismatch");
    if (steps < 1) throw SolverError("euler_solve: need at least 1 step");
    if (!x_init.all_finite()) throw SolverError("euler_solve: non-finite initial state");

    const std::size_t d = x_init.cols();

    // Only rows with at least one missing coordinate move.
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < x_init.rows(); ++i) {
        const double* m = mask.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            if (m[j] == 0.0) {
                active.push_back(i);
                break;
            }
        }
    }
    Matrix out = x_init;
    if (active.empty()) return out;

    Matrix z = x_init.take_rows(active);
    const Matrix x_cond = z;  // observed values condition the whole trajectory
    const Matrix m_sub = mask.take_rows(active);
    const double dt = 1.0 / static_cast<double>(steps);

    for (std::size_t k = 1; k <= steps; ++k) {
        const double tau = static_cast<double>(k) / static_cast<double>(steps);
        const Matrix v = field(z, x_cond, m_sub, tau);
        if (!v.same_shape(z)) throw SolverError("euler_solve: field returned wrong shape");
        for (std::size_t r = 0; r < z.rows(); ++r) {
            double* zr = z.row(r);
            const double* vr = v.row(r);
            const double* mr = m_sub.row(r);
            for (std::size_t j = 0; j < d; ++j) {
                if (mr[j] == 0.0) zr[j] += dt * vr[j];
            }
        }
        if (!z.all_finite())
            throw SolverError("euler_solve: non-finite state at step " + std::to_string(k));
    }

    for (std::size_t r = 0; r < active.size(); ++r) {
        const double* zr = z.row(r);
        const double* mr = m_sub.row(r);
        double* or_ = out.row(active[r]);
        for (std::size_t j = 0; j < d; ++j) {
            if (mr[j] == 0.0) or_[j] = zr[j];
        }
    }
    return out;
}

Matrix euler_solve(const VelocityModel& model, const Matrix& x_init, const Matrix& mask,
                   std::size_t steps) {
    auto field = [&model](const Matrix& z, const Matrix& x_cond, const Matrix& m, double tau) {
        return velocity_at(model, z, x_cond, m, tau);
    };
    return euler_solve(VelocityField(field), x_init, mask, steps);
}

ImputationState impute_once(const ImputationState& state, const VelocityModel& model,
                            std::size_t steps) {
    if (model.dim != state.x.cols()) throw ShapeError("impute_once: model dimension mismatch");
    ImputationState next;
    next.mask = state.mask;
    next.pinned = state.pinned;
    next.x = euler_solve(model, state.x, state.mask, steps);
    next.iteration = state.iteration + 1;
    return next;
}

}  // namespace miri
