#pragma once

#include <cstddef>

#include "dynaedit/flowmodel/velocity_field.hpp"

namespace dynaedit {

// Noise x_src to t_start, then Euler-integrate the target field down to t_min
// over `steps` uniform steps of [0, t_start].
LatentField sdedit(const LatentField& x_src, const VelocityField& target, double t_start,
                   std::size_t steps, RngStream& stream);

LatentField sdedit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_tar,
                   double t_start, std::size_t steps, RngStream& stream, double cfg_scale);

// Euler-integrate the source field forward from t_min to 1, then the target
// field back down to t_min on the same grid.
LatentField ode_inversion(const LatentField& x_src, const VelocityField& source,
                          const VelocityField& target, std::size_t steps);

LatentField ode_inversion(const LatentField& x_src, const MixtureRegistry& registry,
                          const Condition& cond_src, const Condition& cond_tar, std::size_t steps,
                          double cfg_src, double cfg_tar);

}  // namespace dynaedit
