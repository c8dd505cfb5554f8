#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dynaedit {

// Dense frame-major array of shape (frames x frame_dim). Frame 0 occupies the
// first frame_dim entries.
class LatentField {
 public:
  LatentField() = default;
  LatentField(std::size_t frames, std::size_t frame_dim);
  LatentField(std::size_t frames, std::size_t frame_dim, std::vector<double> data);

  static LatentField zeros_like(const LatentField& other) {
    return LatentField(other.frames_, other.frame_dim_);
  }

  std::size_t frames() const noexcept { return frames_; }
  std::size_t frame_dim() const noexcept { return frame_dim_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  std::span<const double> frame(std::size_t f) const;
  std::span<double> frame(std::size_t f);

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at(std::size_t f, std::size_t k) const { return data_[f * frame_dim_ + k]; }
  double& at(std::size_t f, std::size_t k) { return data_[f * frame_dim_ + k]; }

  bool same_shape(const LatentField& other) const noexcept {
    return frames_ == other.frames_ && frame_dim_ == other.frame_dim_;
  }

  bool all_finite() const noexcept;

  // Value equality (so -0.0 == 0.0). Use bitwise_equal for reproducibility checks.
  friend bool operator==(const LatentField& a, const LatentField& b) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t frame_dim_ = 0;
  std::vector<double> data_;
};

bool bitwise_equal(const LatentField& a, const LatentField& b) noexcept;

// Throws Error{shape} unless a and b have identical shape.
void require_same_shape(const LatentField& a, const LatentField& b, const char* where);

}  // namespace dynaedit
