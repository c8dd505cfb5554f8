#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynaedit/editor/edit_config.hpp"

namespace dynaedit {

enum class Method { dynaedit, flowedit, sdedit, ode_inversion, sample };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct StudySpec {
  std::string scenario;
  Method method = Method::dynaedit;
  EditConfig edit;  // edit.seed is replaced by each study seed
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;  // empty: compute only
  // Draw x_src from the scenario with the study seed instead of the
  // scenario's fixed source seed.
  bool vary_source = false;
  double sample_cfg = 1.0;     // sample method
  double sdedit_t_start = 0.6;  // sdedit method

  // Throws Error{config}: empty or duplicated seeds, unknown scenario, or an
  // invalid edit config.
  void validate() const;
};

// Strict JSON schema; unknown keys, wrong types and out-of-range values throw
// Error{config}. Missing keys keep their defaults. An optional "preset" key
// is applied before the explicit "edit" overrides.
StudySpec parse_study_spec(std::string_view json_text);
StudySpec load_study_spec(const std::filesystem::path& path);
std::string study_spec_to_json(const StudySpec& spec);

// "3", "0-19", "1,4,9-11". Throws Error{config}.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace dynaedit
