#include "dynaedit/editor/baselines.hpp"

#include "dynaedit/editor/inversion_free.hpp"
#include "dynaedit/error.hpp"
#include "dynaedit/flowmodel/sampler.hpp"
#include "dynaedit/flowmodel/time_grid.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

LatentField sdedit(const LatentField& x_src, const VelocityField& target, double t_start,
                   std::size_t steps, RngStream& stream) {
  if (!(t_start > 0.0 && t_start <= 1.0)) throw Error(ErrorCategory::config, "sdedit: t_start must lie in (0, 1]");
  if (steps == 0) throw Error(ErrorCategory::config, "sdedit: steps must be >= 1");
  const LatentField w = gaussian(stream, x_src.frames(), x_src.frame_dim());
  LatentField z = noisy_source(x_src, w, t_start);
  std::vector<double> grid = make_time_grid(steps);
  for (double& t : grid) t *= t_start;
  return integrate_down(target, std::move(z), grid, steps);
}

LatentField sdedit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_tar,
                   double t_start, std::size_t steps, RngStream& stream, double cfg_scale) {
  return sdedit(x_src, registry.field(cond_tar, cfg_scale), t_start, steps, stream);
}

LatentField ode_inversion(const LatentField& x_src, const VelocityField& source,
                          const VelocityField& target, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCategory::config, "ode_inversion: steps must be >= 1");
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid[k] = kTMin + (1.0 - kTMin) * static_cast<double>(k) / static_cast<double>(steps);
  }
  grid.back() = 1.0;

  LatentField z = x_src;
  for (std::size_t k = 0; k < steps; ++k) z = axpy(grid[k + 1] - grid[k], source(z, grid[k]), z);
  for (std::size_t k = steps; k >= 1; --k) z = axpy(grid[k - 1] - grid[k], target(z, grid[k]), z);
  return z;
}

LatentField ode_inversion(const LatentField& x_src, const MixtureRegistry& registry,
                          const Condition& cond_src, const Condition& cond_tar, std::size_t steps,
                          double cfg_src, double cfg_tar) {
  return ode_inversion(x_src, registry.field(cond_src, cfg_src), registry.field(cond_tar, cfg_tar), steps);
}

}  // namespace dynaedit
