#include "dynaedit/tensorcore/latent_field.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "dynaedit/error.hpp"

namespace dynaedit {

namespace {

void check_dims(std::size_t frames, std::size_t frame_dim) {
  if (frames == 0 || frame_dim == 0) {
    throw Error(ErrorCategory::shape, "LatentField requires frames >= 1 and frame_dim >= 1");
  }
}

}  // namespace

LatentField::LatentField(std::size_t frames, std::size_t frame_dim)
    : frames_(frames), frame_dim_(frame_dim) {
  check_dims(frames, frame_dim);
  data_.assign(frames * frame_dim, 0.0);
}

LatentField::LatentField(std::size_t frames, std::size_t frame_dim, std::vector<double> data)
    : frames_(frames), frame_dim_(frame_dim), data_(std::move(data)) {
  check_dims(frames, frame_dim);
  if (data_.size() != frames * frame_dim) {
    throw Error(ErrorCategory::shape, "LatentField data length " + std::to_string(data_.size()) +
                                          " != " + std::to_string(frames) + " x " +
                                          std::to_string(frame_dim));
  }
}

std::span<const double> LatentField::frame(std::size_t f) const {
  if (f >= frames_) throw Error(ErrorCategory::shape, "frame index out of range");
  return std::span<const double>(data_).subspan(f * frame_dim_, frame_dim_);
}

std::span<double> LatentField::frame(std::size_t f) {
  if (f >= frames_) throw Error(ErrorCategory::shape, "frame index out of range");
  return std::span<double>(data_).subspan(f * frame_dim_, frame_dim_);
}

bool LatentField::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool bitwise_equal(const LatentField& a, const LatentField& b) noexcept {
  if (!a.same_shape(b)) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

void require_same_shape(const LatentField& a, const LatentField& b, const char* where) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCategory::shape,
                std::string(where) + ": shape mismatch (" + std::to_string(a.frames()) + "x" +
                    std::to_string(a.frame_dim()) + " vs " + std::to_string(b.frames()) + "x" +
                    std::to_string(b.frame_dim()) + ")");
  }
}

}  // namespace dynaedit
