#include "miri/synth.hpp"

#include <cmath>

#include "miri/errors.hpp"

namespace miri {

void MixtureSpec::validate() const {
    if (weights.empty() || weights.size() != means.size() || weights.size() != stds.size())
        throw ConfigError("mixture: weights, means and stds must have equal nonzero length");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ConfigError("mixture: weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("mixture: weights must sum to 1");
    const std::size_t d = dim();
    if (d == 0) throw ConfigError("mixture: dimension must be positive");
    for (const auto& m : means)
        if (m.size() != d) throw ConfigError("mixture: component means differ in dimension");
    for (double s : stds)
        if (!(s > 0.0)) throw ConfigError("mixture: stds must be positive");
}

MixtureSpec toy_mixture() {
    MixtureSpec spec;
    spec.weights = {0.5, 0.5};
    spec.means = {{-2.0, -2.0}, {2.0, 2.0}};
    spec.stds = {0.5, 0.5};
    return spec;
}

Matrix sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    const std::size_t d = spec.dim();
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        double cum = 0.0;
        std::size_t comp = spec.weights.size() - 1;
        for (std::size_t c = 0; c < spec.weights.size(); ++c) {
            cum += spec.weights[c];
            if (u < cum) {
                comp = c;
                break;
            }
        }
        double* row = x.row(i);
        for (std::size_t j = 0; j < d; ++j)
            row[j] = spec.means[comp][j] + spec.stds[comp] * rng.normal();
    }
    return x;
}

}  // namespace miri
