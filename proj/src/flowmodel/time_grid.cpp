#include "dynaedit/flowmodel/time_grid.hpp"

#include "dynaedit/error.hpp"

namespace dynaedit {

double shift_time(double u, double shift) noexcept {
  if (shift == 1.0) return u;
  return shift * u / (1.0 + (shift - 1.0) * u);
}

std::vector<double> make_time_grid(std::size_t steps, double shift) {
  if (steps == 0) throw Error(ErrorCategory::config, "time grid needs at least one step");
  if (!(shift > 0.0)) throw Error(ErrorCategory::config, "time shift must be positive");
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    grid[i] = shift_time(static_cast<double>(i) / static_cast<double>(steps), shift);
  }
  grid.front() = 0.0;
  grid.back() = 1.0;
  return grid;
}

}  // namespace dynaedit
