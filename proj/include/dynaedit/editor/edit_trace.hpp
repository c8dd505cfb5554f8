#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

// Diagnostics for one executed edit (or sampling) step.
struct EditStepRecord {
  std::size_t step = 0;  // timestep index i, counting down
  double t = 0.0;
  double anc_coefficient = 0.0;
  std::size_t active_slots = 0;
  std::vector<double> similarities;  // empty when no similarity was scored
  std::vector<double> weights;
  double velocity_norm = 0.0;
  // cos(noise of slot j at this step, noise of slot j at the previous step);
  // empty on the first step.
  std::vector<double> noise_cosine;
  // cos(aggregated velocity now, aggregated velocity at the previous step);
  // absent on the first step or when either velocity is zero.
  std::optional<double> velocity_cosine;
  std::optional<LatentField> snapshot;
};

struct EditTrace {
  std::vector<EditStepRecord> steps;
};

}  // namespace dynaedit
