#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dynaedit {

enum class AncKind { iid, constant, markov_increasing, markov_decreasing, non_markov_increasing };

std::string_view to_string(AncKind kind) noexcept;
AncKind parse_anc_kind(std::string_view name);

// Noise-correlation coefficient a(t) applied at each edit step.
//   iid                    a = 0
//   constant               a = 1 (frozen noise)
//   markov_increasing      a = clamp((1 - t) / (1 - t_saturate), 0, 1)
//   markov_decreasing      the increasing ramp mirrored in time, clamp(t / (1 - t_saturate), 0, 1)
//   non_markov_increasing  increasing ramp, mixed against a fixed anchor noise instead of the
//                          previous step's noise
// The first executed step always uses a = 0 because the correlated noise
// starts from zero.
struct AncSchedule {
  AncKind kind = AncKind::markov_increasing;
  double t_saturate = 0.25;

  double coefficient(double t, bool first_step) const;
  bool anchored() const noexcept { return kind == AncKind::non_markov_increasing; }
};

enum class SimilarityKind { cosine, neg_mse };

std::string_view to_string(SimilarityKind kind) noexcept;
SimilarityKind parse_similarity(std::string_view name);

// Number of noise slots evaluated at step i of N: `early_count` while
// i > N - early_steps, `late_count` afterwards.
struct SlotSchedule {
  std::size_t early_count = 5;
  std::size_t early_steps = 3;
  std::size_t late_count = 1;

  static SlotSchedule constant(std::size_t count) { return {count, 0, count}; }

  std::size_t count(std::size_t step, std::size_t total_steps) const noexcept;
  std::size_t max_count() const noexcept;

  friend bool operator==(const SlotSchedule&, const SlotSchedule&) = default;
};

struct EditConfig {
  std::size_t steps = 50;
  std::size_t n_max = 50;
  SlotSchedule slots;
  double tau = 0.01;  // +infinity selects exactly uniform weights
  AncSchedule anc;
  double cfg_src = 2.5;
  double cfg_tar = 4.5;
  SimilarityKind similarity = SimilarityKind::cosine;
  std::uint64_t seed = 0;
  double shift = 1.0;
  std::size_t bank_size = 0;        // 0: sized from the slot schedule
  std::size_t snapshot_stride = 0;  // 0: no intermediate snapshots

  // Throws Error{config}.
  void validate() const;
  std::size_t resolved_bank_size() const;
};

struct EditPreset {
  std::string name;
  double cfg_src;
  double cfg_tar;
  double tau;
};

// The four CFG / temperature groups used for the reference edits.
const std::vector<EditPreset>& edit_presets();
const EditPreset& find_preset(std::string_view name);
void apply_preset(EditConfig& config, const EditPreset& preset);

}  // namespace dynaedit
