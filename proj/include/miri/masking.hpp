#pragma once

#include <cstdint>
#include <string>

#include "miri/dataset.hpp"
#include "miri/matrix.hpp"
#include "miri/rng.hpp"

namespace miri {

enum class Mechanism {
    Mcar,
    Mar,
    Mnar,
};

Mechanism parse_mechanism(const std::string& name);
std::string to_string(Mechanism m);

/// How to draw a synthetic missingness mask for benchmarking.
struct MaskSpec {
    Mechanism mechanism = Mechanism::Mcar;
    double rate = 0.3;            // target missing fraction, in (0,1)
    double cond_fraction = 0.5;   // MAR only: fraction of always-observed features
    std::uint64_t seed = 0;

    void validate(std::size_t d) const;
};

/// Each entry independently missing with probability `rate`.
Matrix gen_mcar(std::size_t n, std::size_t d, double rate, Rng& rng);

/// A random `cond_fraction` of features stays fully observed; the remaining
/// features go missing with logistic probability in the sum of the
/// conditioning features (slope 1), intercept bisected so the overall missing
/// fraction hits `rate`.
Matrix gen_mar(const Matrix& x_true, double rate, double cond_fraction, Rng& rng);

/// Self-masking: each entry goes missing with logistic probability in its own
/// value (slope 1), intercept bisected to hit `rate` overall.
Matrix gen_mnar(const Matrix& x_true, double rate, Rng& rng);

/// Dispatch on spec.mechanism with a generator seeded from spec.seed.
Matrix generate_mask(const Matrix& x_true, const MaskSpec& spec);

/// Keeps x_true where mask = 1, NaN elsewhere. The caller retains x_true for
/// evaluation.
MaskedDataset apply_mask(const Matrix& x_true, const Matrix& mask);

/// Fraction of zero entries.
double missing_fraction(const Matrix& mask);

}  // namespace miri
