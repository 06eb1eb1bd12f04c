#include "miri/mlp.hpp"

#include <cmath>
#include <string>

#include "miri/errors.hpp"

namespace miri {

namespace {

double activate(Activation act, double x) {
    switch (act) {
        case Activation::Silu:
            return x / (1.0 + std::exp(-x));
        case Activation::Tanh:
            return std::tanh(x);
    }
    return x;
}

std::vector<std::size_t> layer_sizes(const MlpShape& shape) {
    std::vector<std::size_t> sizes;
    sizes.push_back(shape.input);
    for (std::size_t h : shape.hidden) sizes.push_back(h);
    sizes.push_back(shape.output);
    return sizes;
}

void check_shape(const MlpShape& shape) {
    if (shape.input == 0 || shape.output == 0)
        throw ShapeError("mlp: input and output sizes must be positive");
    for (std::size_t h : shape.hidden)
        if (h == 0) throw ShapeError("mlp: hidden layer size must be positive");
}

}  // namespace

std::size_t MlpParams::parameter_count() const {
    std::size_t n = 0;
    for (const Matrix& w : weights) n += w.size();
    for (const auto& b : biases) n += b.size();
    return n;
}

MlpParams MlpParams::init(const MlpShape& shape, Rng& rng, Activation act) {
    check_shape(shape);
    MlpParams p;
    p.shape = shape;
    p.activation = act;
    const auto sizes = layer_sizes(shape);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t fan_in = sizes[l], fan_out = sizes[l + 1];
        Matrix w(fan_in, fan_out);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w.storage()) v = (2.0 * rng.uniform() - 1.0) * bound;
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(fan_out, 0.0);
    }
    return p;
}

MlpParams MlpParams::zeros(const MlpShape& shape, Activation act) {
    check_shape(shape);
    MlpParams p;
    p.shape = shape;
    p.activation = act;
    const auto sizes = layer_sizes(shape);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        p.weights.emplace_back(sizes[l], sizes[l + 1]);
        p.biases.emplace_back(sizes[l + 1], 0.0);
    }
    return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& other) {
    return zeros(other.shape, other.activation);
}

bool MlpParams::all_finite() const {
    for (const Matrix& w : weights)
        if (!w.all_finite()) return false;
    for (const auto& b : biases)
        for (double v : b)
            if (!std::isfinite(v)) return false;
    return true;
}

namespace {

// Z = A * W + b, reusing the matmul kernel and adding the bias row-wise.
Matrix affine(const Matrix& a, const Matrix& w, const std::vector<double>& b) {
    Matrix z = matmul(a, w);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double* row = z.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) row[j] += b[j];
    }
    return z;
}

}  // namespace

Matrix mlp_forward(const MlpParams& params, const Matrix& batch) {
    if (batch.cols() != params.input_size())
        throw ShapeError("mlp_forward: batch has " + std::to_string(batch.cols()) +
                         " columns, network expects " + std::to_string(params.input_size()));
    Matrix a = batch;
    const std::size_t layers = params.layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z = affine(a, params.weights[l], params.biases[l]);
        if (l + 1 < layers) {
            for (double& v : z.storage()) v = activate(params.activation, v);
        }
        a = std::move(z);
    }
    return a;
}

LossGrad mlp_loss_grad(const MlpParams& params, const Matrix& batch, const Matrix& targets) {
    if (batch.cols() != params.input_size())
        throw ShapeError("mlp_loss_grad: batch width " + std::to_string(batch.cols()) +
                         " != network input " + std::to_string(params.input_size()));
    if (targets.cols() != params.output_size() || targets.rows() != batch.rows())
        throw ShapeError("mlp_loss_grad: targets (" + std::to_string(targets.rows()) + "x" +
                         std::to_string(targets.cols()) + ") do not match batch rows " +
                         std::to_string(batch.rows()) + " and output size " +
                         std::to_string(params.output_size()));

    const std::size_t layers = params.layer_count();
    const std::size_t batch_rows = batch.rows();

    // Forward pass; hidden layers also store the activation derivative so the
    // backward sweep reuses the same transcendental evaluations.
    std::vector<Matrix> activations;  // activations[l] feeds layer l
    std::vector<Matrix> act_grads;    // act_grads[l] for hidden layer l
    activations.reserve(layers + 1);
    act_grads.reserve(layers);
    activations.push_back(batch);
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z = affine(activations.back(), params.weights[l], params.biases[l]);
        if (l + 1 < layers) {
            Matrix g(z.rows(), z.cols());
            double* zp = z.data();
            double* gp = g.data();
            if (params.activation == Activation::Silu) {
                for (std::size_t idx = 0; idx < z.size(); ++idx) {
                    const double x = zp[idx];
                    const double s = 1.0 / (1.0 + std::exp(-x));
                    zp[idx] = x * s;
                    gp[idx] = s * (1.0 + x * (1.0 - s));
                }
            } else {
                for (std::size_t idx = 0; idx < z.size(); ++idx) {
                    const double t = std::tanh(zp[idx]);
                    zp[idx] = t;
                    gp[idx] = 1.0 - t * t;
                }
            }
            act_grads.push_back(std::move(g));
        }
        activations.push_back(std::move(z));
    }

    const Matrix& output = activations.back();
    double loss = 0.0;
    Matrix delta(batch_rows, params.output_size());
    const double scale = 2.0 / static_cast<double>(batch_rows);
    for (std::size_t i = 0; i < batch_rows; ++i) {
        const double* out = output.row(i);
        const double* tgt = targets.row(i);
        double* d = delta.row(i);
        for (std::size_t j = 0; j < params.output_size(); ++j) {
            const double r = out[j] - tgt[j];
            loss += r * r;
            d[j] = scale * r;
        }
    }
    loss /= static_cast<double>(batch_rows);

    LossGrad result;
    result.loss = loss;
    result.grads = MlpParams::zeros_like(params);
    for (std::size_t l = layers; l-- > 0;) {
        result.grads.weights[l] = matmul_at_b(activations[l], delta);
        auto& db = result.grads.biases[l];
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            const double* d = delta.row(i);
            for (std::size_t j = 0; j < delta.cols(); ++j) db[j] += d[j];
        }
        if (l > 0) {
            Matrix next = matmul_a_bt(delta, params.weights[l]);
            const Matrix& g = act_grads[l - 1];
            for (std::size_t idx = 0; idx < next.size(); ++idx)
                next.data()[idx] *= g.data()[idx];
            delta = std::move(next);
        }
    }
    return result;
}

OptimizerState OptimizerState::create(const MlpParams& like, double learning_rate) {
    OptimizerState opt;
    opt.first_moment = MlpParams::zeros_like(like);
    opt.second_moment = MlpParams::zeros_like(like);
    opt.learning_rate = learning_rate;
    return opt;
}

namespace {

void adam_update_span(double* p, const double* g, double* m, double* v, std::size_t n,
                      double lr, double b1, double b2, double eps, double corr1, double corr2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double mhat = m[i] / corr1;
        const double vhat = v[i] / corr2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

void adam_step(MlpParams& params, const MlpParams& grads, OptimizerState& opt) {
    if (!grads.all_finite())
        throw TrainingError("adam_step: non-finite gradient at step " +
                            std::to_string(opt.step + 1));
    opt.step += 1;
    const double t = static_cast<double>(opt.step);
    const double corr1 = 1.0 - std::pow(opt.beta1, t);
    const double corr2 = 1.0 - std::pow(opt.beta2, t);
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        adam_update_span(params.weights[l].data(), grads.weights[l].data(),
                         opt.first_moment.weights[l].data(), opt.second_moment.weights[l].data(),
                         params.weights[l].size(), opt.learning_rate, opt.beta1, opt.beta2,
                         opt.eps, corr1, corr2);
        adam_update_span(params.biases[l].data(), grads.biases[l].data(),
                         opt.first_moment.biases[l].data(), opt.second_moment.biases[l].data(),
                         params.biases[l].size(), opt.learning_rate, opt.beta1, opt.beta2,
                         opt.eps, corr1, corr2);
    }
}

}  // namespace miri
