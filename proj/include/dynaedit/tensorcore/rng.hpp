#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

// Counter-based generator state. The Philox key is the seed, the upper half of
// the counter block is the stream id, and the lower half is `counter`. Two
// streams with the same (seed, stream_id) produce the same values no matter
// which thread draws them or in which order.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3").
PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key) noexcept;

// Returns the next 128 random bits of the stream and advances its counter.
PhiloxBlock next_block(RngStream& stream) noexcept;

// Uniform in the open interval (0, 1), 53-bit resolution.
double next_uniform(RngStream& stream) noexcept;

// Standard normal pair via Box-Muller on one Philox block.
std::array<double, 2> next_normal_pair(RngStream& stream) noexcept;

// Fills a field with N(0, 1) entries; consumes ceil(T*d/2) counter values.
LatentField gaussian(RngStream& stream, std::size_t frames, std::size_t frame_dim);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Order-sensitive hash of a tuple of integers, used to address sub-streams.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts) noexcept;

}  // namespace dynaedit
