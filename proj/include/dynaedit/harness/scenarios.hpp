#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynaedit/flowmodel/velocity_field.hpp"

namespace dynaedit {

// Columns [begin, end) of each frame.
struct DimRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// A toy editing task: a registry of condition laws, the designated source and
// target labels, and a recipe for the source latent.
struct Scenario {
  std::string name;
  std::string description;
  std::size_t frames = 0;
  std::size_t frame_dim = 0;
  MixtureRegistry registry;
  std::string source_label;
  std::string target_label;
  bool condition_on_first_frame = true;
  std::uint64_t source_seed = 0;
  // Block that should survive the edit unchanged (two-object scenario).
  std::optional<DimRange> preserved_block;

  // Exact draw from the source law, addressed by (scenario name, seed).
  LatentField source_sample(std::uint64_t seed) const;
  LatentField source_sample() const { return source_sample(source_seed); }

  Condition source_condition(const LatentField& x_src) const;
  Condition target_condition(const LatentField& x_src) const;
  // Target law after first-frame conditioning on x_src.
  ConditionedMixture target_law(const LatentField& x_src) const;
};

Scenario make_mean_shift_scenario(double offset);
Scenario make_trajectory_jump_scenario();
Scenario make_two_object_scenario();
Scenario make_bimodal_target_scenario();

std::vector<Scenario> builtin_scenarios();
Scenario find_scenario(const std::string& name);

}  // namespace dynaedit
