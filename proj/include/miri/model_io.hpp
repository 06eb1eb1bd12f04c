#pragma once

#include <string>

#include "miri/flow.hpp"

namespace miri {

/// Versioned text checkpoint: an architecture header followed by the flat
/// parameter vector at round-trip precision. Layout:
///
///   miri-velocity-field 1
///   dim <d>
///   activation silu|tanh
///   hidden <h1> <h2> ...
///   params <count>
///   <one value per line, weights then bias per layer, row-major>
void save_velocity_model(const std::string& path, const VelocityModel& model);

VelocityModel load_velocity_model(const std::string& path);

}  // namespace miri
