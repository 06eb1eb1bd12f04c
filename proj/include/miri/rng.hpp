#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace miri {

/// Seeded pseudo-random source. Identical seed plus identical call sequence
/// yields an identical stream, which is what makes whole runs reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, one spare cached per pair.
    double normal();

    /// Uniform integer in [0, n), rejection sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n);

    std::vector<double> uniform_vec(std::size_t n);
    std::vector<double> normal_vec(std::size_t n);

    /// Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// splitmix64 mix step; used to derive independent sub-seeds from a run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace miri
