#pragma once

#include <cstddef>
#include <vector>

#include "miri/matrix.hpp"
#include "miri/rng.hpp"

namespace miri {

/// Isotropic Gaussian mixture specification.
struct MixtureSpec {
    std::vector<double> weights;             // sums to 1
    std::vector<std::vector<double>> means;  // one center per component
    std::vector<double> stds;                // one isotropic std per component

    std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
    void validate() const;
};

/// The benchmark preset: two equal clusters at (-2,-2) and (2,2), std 0.5.
MixtureSpec toy_mixture();

Matrix sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng);

}  // namespace miri
