#pragma once

#include <cstddef>
#include <vector>

namespace dynaedit {

// Generation and inversion stop at (or start from) t_min instead of t = 0,
// where the velocity is singular.
inline constexpr double kTMin = 1e-3;

// t_0 = 0 < t_1 < ... < t_N = 1 with t_i = shift(i / N) and
// shift(u) = s u / (1 + (s - 1) u).
std::vector<double> make_time_grid(std::size_t steps, double shift = 1.0);

double shift_time(double u, double shift) noexcept;

}  // namespace dynaedit
