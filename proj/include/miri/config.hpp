#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "miri/dataset.hpp"

namespace miri {

/// Hyperparameters of a full imputation run.
struct MiriConfig {
    std::size_t outer_iterations = 10;  // T
    std::size_t train_steps = 2000;     // N optimizer steps per iteration
    std::size_t batch_size = 256;       // B
    std::size_t euler_steps = 100;
    std::vector<std::size_t> hidden = {128, 128, 128};
    double learning_rate = 1e-3;
    InitStrategy init = InitStrategy::Normal;
    std::uint64_t seed = 0;
    bool warm_start = false;
    std::size_t mi_bins = 8;

    void validate(std::size_t n_rows) const;

    /// Canonical "key = value" serialization; also the config-file format.
    std::string to_text() const;

    /// FNV-1a hash of the canonical serialization, as 16 hex chars.
    std::string hash() const;
};

/// Parses a flat key = value config file. Unknown keys are errors; missing
/// keys keep their defaults. '#' starts a comment.
MiriConfig load_config(const std::string& path);

/// Parses config text (same format as the file).
MiriConfig parse_config(const std::string& text, const MiriConfig& base = {});

}  // namespace miri
