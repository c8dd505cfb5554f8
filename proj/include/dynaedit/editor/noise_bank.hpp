#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

// Correlated per-slot noise carried across edit steps. Fresh noise for slot j
// at step i always comes from stream (seed, edit_noise_stream(j, i)), so i.i.d.
// and correlated runs with the same seed see the same innovations.
struct NoiseBank {
  std::vector<LatentField> slots;
  std::vector<LatentField> anchors;  // only for anchored (non-Markovian) schedules
  std::uint64_t seed = 0;
};

std::uint64_t edit_noise_stream(std::size_t slot, std::size_t step) noexcept;

LatentField fresh_noise(std::uint64_t seed, std::size_t slot, std::size_t step, std::size_t frames,
                        std::size_t frame_dim);

// Slots start at zero.
NoiseBank make_noise_bank(std::size_t slots, std::size_t frames, std::size_t frame_dim,
                          std::uint64_t seed, bool anchored = false);

// slot_j <- sqrt(a) slot_j + sqrt(1 - a) w_j with w_j fresh for (j, step).
NoiseBank anc_step(const NoiseBank& bank, double a, std::size_t step);

// slot_j <- sqrt(a) anchor_j + sqrt(1 - a) w_j.
NoiseBank anchored_step(const NoiseBank& bank, double a, std::size_t step);

}  // namespace dynaedit
