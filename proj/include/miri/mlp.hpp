#pragma once

#include <cstddef>
#include <vector>

#include "miri/matrix.hpp"
#include "miri/rng.hpp"

namespace miri {

enum class Activation {
    Silu,
    Tanh,
};

struct MlpShape {
    std::size_t input = 0;
    std::vector<std::size_t> hidden;
    std::size_t output = 0;
};

/// Feed-forward network parameters. Hidden layers use a smooth activation,
/// the output layer is linear. Weight layout per layer: (fan_in x fan_out).
struct MlpParams {
    MlpShape shape;
    Activation activation = Activation::Silu;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t input_size() const { return shape.input; }
    std::size_t output_size() const { return shape.output; }
    std::size_t layer_count() const { return weights.size(); }
    std::size_t parameter_count() const;

    /// Fan-in scaled uniform weights, zero biases.
    static MlpParams init(const MlpShape& shape, Rng& rng, Activation act = Activation::Silu);
    static MlpParams zeros_like(const MlpParams& other);
    static MlpParams zeros(const MlpShape& shape, Activation act = Activation::Silu);

    bool all_finite() const;
};

/// Batched forward pass: batch (B x input) -> (B x output).
Matrix mlp_forward(const MlpParams& params, const Matrix& batch);

struct LossGrad {
    double loss = 0.0;
    MlpParams grads;
};

/// Mean over rows of the squared Euclidean residual ||target - output||^2,
/// together with its exact gradients w.r.t. every parameter.
LossGrad mlp_loss_grad(const MlpParams& params, const Matrix& batch, const Matrix& targets);

/// Adam accumulators; shapes mirror the parameters they update.
struct OptimizerState {
    MlpParams first_moment;
    MlpParams second_moment;
    std::size_t step = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static OptimizerState create(const MlpParams& like, double learning_rate = 1e-3);
};

/// One bias-corrected adaptive-moment update, in place.
/// Throws TrainingError on non-finite gradients.
void adam_step(MlpParams& params, const MlpParams& grads, OptimizerState& opt);

}  // namespace miri
