#include "dynaedit/editor/noise_bank.hpp"

#include <cmath>

#include "dynaedit/error.hpp"
#include "dynaedit/tensorcore/rng.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

namespace {

constexpr std::uint64_t kEditNoiseTag = 0x45444954u;  // "EDIT"
constexpr std::uint64_t kAnchorTag = 0x414E4348u;     // "ANCH"

void check_coefficient(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCategory::config, "ANC coefficient must lie in [0, 1]");
}

}  // namespace

std::uint64_t edit_noise_stream(std::size_t slot, std::size_t step) noexcept {
  return derive_stream_id({kEditNoiseTag, slot, step});
}

LatentField fresh_noise(std::uint64_t seed, std::size_t slot, std::size_t step, std::size_t frames,
                        std::size_t frame_dim) {
  RngStream stream{seed, edit_noise_stream(slot, step), 0};
  return gaussian(stream, frames, frame_dim);
}

NoiseBank make_noise_bank(std::size_t slots, std::size_t frames, std::size_t frame_dim,
                          std::uint64_t seed, bool anchored) {
  NoiseBank bank;
  bank.seed = seed;
  bank.slots.assign(slots, LatentField(frames, frame_dim));
  if (anchored) {
    for (std::size_t j = 0; j < slots; ++j) {
      RngStream stream{seed, derive_stream_id({kAnchorTag, j}), 0};
      bank.anchors.push_back(gaussian(stream, frames, frame_dim));
    }
  }
  return bank;
}

NoiseBank anc_step(const NoiseBank& bank, double a, std::size_t step) {
  check_coefficient(a);
  NoiseBank next = bank;
  const double keep = std::sqrt(a);
  const double mix = std::sqrt(1.0 - a);
  for (std::size_t j = 0; j < next.slots.size(); ++j) {
    const auto& prev = bank.slots[j];
    next.slots[j] = linear_combination(keep, prev, mix,
                                       fresh_noise(bank.seed, j, step, prev.frames(), prev.frame_dim()));
  }
  return next;
}

NoiseBank anchored_step(const NoiseBank& bank, double a, std::size_t step) {
  check_coefficient(a);
  if (bank.anchors.size() != bank.slots.size()) {
    throw Error(ErrorCategory::config_mismatch, "anchored_step: bank has no anchor noise");
  }
  NoiseBank next = bank;
  const double keep = std::sqrt(a);
  const double mix = std::sqrt(1.0 - a);
  for (std::size_t j = 0; j < next.slots.size(); ++j) {
    const auto& anchor = bank.anchors[j];
    next.slots[j] = linear_combination(
        keep, anchor, mix, fresh_noise(bank.seed, j, step, anchor.frames(), anchor.frame_dim()));
  }
  return next;
}

}  // namespace dynaedit
