#include "dynaedit/tensorcore/rng.hpp"

#include <cmath>
#include <numbers>

namespace dynaedit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_open_unit(std::uint64_t bits) noexcept {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0 or 1.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

PhiloxBlock next_block(RngStream& stream) noexcept {
  const PhiloxBlock ctr = {
      static_cast<std::uint32_t>(stream.counter),
      static_cast<std::uint32_t>(stream.counter >> 32),
      static_cast<std::uint32_t>(stream.stream_id),
      static_cast<std::uint32_t>(stream.stream_id >> 32),
  };
  const PhiloxKey key = {static_cast<std::uint32_t>(stream.seed),
                         static_cast<std::uint32_t>(stream.seed >> 32)};
  ++stream.counter;
  return philox4x32(ctr, key);
}

double next_uniform(RngStream& stream) noexcept {
  const PhiloxBlock b = next_block(stream);
  return to_open_unit((static_cast<std::uint64_t>(b[1]) << 32) | b[0]);
}

std::array<double, 2> next_normal_pair(RngStream& stream) noexcept {
  const PhiloxBlock b = next_block(stream);
  const double u1 = to_open_unit((static_cast<std::uint64_t>(b[1]) << 32) | b[0]);
  const double u2 = to_open_unit((static_cast<std::uint64_t>(b[3]) << 32) | b[2]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

LatentField gaussian(RngStream& stream, std::size_t frames, std::size_t frame_dim) {
  LatentField out(frames, frame_dim);
  auto values = out.values();
  std::size_t i = 0;
  for (; i + 1 < values.size(); i += 2) {
    const auto pair = next_normal_pair(stream);
    values[i] = pair[0];
    values[i + 1] = pair[1];
  }
  if (i < values.size()) values[i] = next_normal_pair(stream)[0];
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ull;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

}  // namespace dynaedit
