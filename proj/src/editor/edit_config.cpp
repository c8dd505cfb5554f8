#include "dynaedit/editor/edit_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynaedit/error.hpp"

namespace dynaedit {

std::string_view to_string(AncKind kind) noexcept {
  switch (kind) {
    case AncKind::iid: return "iid";
    case AncKind::constant: return "constant";
    case AncKind::markov_increasing: return "markov_increasing";
    case AncKind::markov_decreasing: return "markov_decreasing";
    case AncKind::non_markov_increasing: return "non_markov_increasing";
  }
  return "iid";
}

AncKind parse_anc_kind(std::string_view name) {
  for (AncKind k : {AncKind::iid, AncKind::constant, AncKind::markov_increasing,
                    AncKind::markov_decreasing, AncKind::non_markov_increasing}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCategory::config, "unknown ANC schedule '" + std::string(name) + "'");
}

std::string_view to_string(SimilarityKind kind) noexcept {
  return kind == SimilarityKind::cosine ? "cosine" : "neg_mse";
}

SimilarityKind parse_similarity(std::string_view name) {
  if (name == "cosine") return SimilarityKind::cosine;
  if (name == "neg_mse") return SimilarityKind::neg_mse;
  throw Error(ErrorCategory::config, "unknown similarity '" + std::string(name) + "'");
}

double AncSchedule::coefficient(double t, bool first_step) const {
  if (first_step) return 0.0;
  const double ramp_span = 1.0 - t_saturate;
  switch (kind) {
    case AncKind::iid: return 0.0;
    case AncKind::constant: return 1.0;
    case AncKind::markov_increasing:
    case AncKind::non_markov_increasing: return std::clamp((1.0 - t) / ramp_span, 0.0, 1.0);
    case AncKind::markov_decreasing: return std::clamp(t / ramp_span, 0.0, 1.0);
  }
  return 0.0;
}

std::size_t SlotSchedule::count(std::size_t step, std::size_t total_steps) const noexcept {
  return step + early_steps > total_steps ? early_count : late_count;
}

std::size_t SlotSchedule::max_count() const noexcept {
  return early_steps > 0 ? std::max(early_count, late_count) : late_count;
}

void EditConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCategory::config, msg); };
  if (steps == 0) fail("steps must be >= 1");
  if (n_max > steps) fail("n_max must not exceed steps");
  if (slots.early_count == 0 || slots.late_count == 0) fail("slot counts must be >= 1");
  if (!(tau > 0.0)) fail("tau must be > 0");
  if (!(anc.t_saturate > 0.0 && anc.t_saturate < 1.0)) fail("t_saturate must lie in (0, 1)");
  if (!(cfg_src >= 0.0) || !(cfg_tar >= 0.0)) fail("cfg scales must be >= 0");
  if (!(shift > 0.0) || !std::isfinite(shift)) fail("shift must be positive");
  if (bank_size != 0 && bank_size < slots.max_count()) {
    throw Error(ErrorCategory::config_mismatch,
                "slot schedule needs " + std::to_string(slots.max_count()) +
                    " noise slots but bank_size is " + std::to_string(bank_size));
  }
}

std::size_t EditConfig::resolved_bank_size() const {
  return bank_size == 0 ? slots.max_count() : bank_size;
}

const std::vector<EditPreset>& edit_presets() {
  static const std::vector<EditPreset> presets = {
      {"mild-aligned", 2.5, 4.5, 0.01},
      {"mild-free", 2.5, 4.5, 1.0},
      {"strong-aligned", 4.5, 8.5, 0.01},
      {"strong-free", 4.5, 8.5, 1.0},
  };
  return presets;
}

const EditPreset& find_preset(std::string_view name) {
  for (const auto& p : edit_presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCategory::config, "unknown preset '" + std::string(name) + "'");
}

void apply_preset(EditConfig& config, const EditPreset& preset) {
  config.cfg_src = preset.cfg_src;
  config.cfg_tar = preset.cfg_tar;
  config.tau = preset.tau;
}

}  // namespace dynaedit
