#pragma once

#include <cstddef>
#include <span>

#include "dynaedit/flowmodel/velocity_field.hpp"

namespace dynaedit {

struct SampleOptions {
  std::size_t steps = 50;
  double cfg_scale = 1.0;
  double shift = 1.0;
};

// Euler integration of dz/dt = V(z, t) from grid[from] down to grid[0]; a
// grid[0] below kTMin is replaced by kTMin.
LatentField integrate_down(const VelocityField& field, LatentField z, std::span<const double> grid,
                           std::size_t from);

// Pure-noise start at t = 1, Euler down to t_min.
LatentField sample(const VelocityField& field, std::size_t frames, std::size_t frame_dim,
                   const SampleOptions& options, RngStream& stream);

LatentField sample(const MixtureRegistry& registry, const Condition& condition,
                   const SampleOptions& options, RngStream& stream);

LatentField sample(const ConditionedMixture& mix, std::size_t steps, RngStream& stream);

}  // namespace dynaedit
