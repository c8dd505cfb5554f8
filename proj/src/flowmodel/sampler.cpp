#include "dynaedit/flowmodel/sampler.hpp"

#include <algorithm>

#include "dynaedit/error.hpp"
#include "dynaedit/flowmodel/time_grid.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

LatentField integrate_down(const VelocityField& field, LatentField z, std::span<const double> grid,
                           std::size_t from) {
  if (from >= grid.size()) throw Error(ErrorCategory::config, "integrate_down: start index out of range");
  for (std::size_t i = from; i >= 1; --i) {
    const double t = grid[i];
    if (t <= kTMin) break;
    const double t_next = std::max(grid[i - 1], kTMin);
    z = axpy(t_next - t, field(z, t), z);
  }
  return z;
}

LatentField sample(const VelocityField& field, std::size_t frames, std::size_t frame_dim,
                   const SampleOptions& options, RngStream& stream) {
  if (options.steps == 0) throw Error(ErrorCategory::config, "sample: steps must be >= 1");
  const auto grid = make_time_grid(options.steps, options.shift);
  return integrate_down(field, gaussian(stream, frames, frame_dim), grid, options.steps);
}

LatentField sample(const MixtureRegistry& registry, const Condition& condition,
                   const SampleOptions& options, RngStream& stream) {
  const auto& mix = registry.get(condition.prompt);
  return sample(registry.field(condition, options.cfg_scale), mix.frames(), mix.frame_dim(), options,
                stream);
}

LatentField sample(const ConditionedMixture& mix, std::size_t steps, RngStream& stream) {
  auto shared = std::make_shared<const ConditionedMixture>(mix);
  VelocityField field([shared](const LatentField& x, double t) { return mixture_velocity(*shared, x, t); });
  SampleOptions options;
  options.steps = steps;
  return sample(field, mix.frames(), mix.frame_dim(), options, stream);
}

}  // namespace dynaedit
