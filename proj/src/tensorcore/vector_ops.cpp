#include "dynaedit/tensorcore/vector_ops.hpp"

#include <algorithm>
#include <cmath>

#include "dynaedit/error.hpp"

namespace dynaedit {

double dot(const LatentField& a, const LatentField& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const LatentField& a) noexcept {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return acc;
}

double norm(const LatentField& a) noexcept { return std::sqrt(squared_norm(a)); }

double cosine_sim(const LatentField& a, const LatentField& b) {
  require_same_shape(a, b, "cosine_sim");
  constexpr double kTiny = 1e-12;
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kTiny && nb < kTiny) {
    throw Error(ErrorCategory::degenerate_input, "cosine_sim: both inputs have zero norm");
  }
  if (na < kTiny || nb < kTiny) return 0.0;
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double neg_mse(const LatentField& a, const LatentField& b) {
  require_same_shape(a, b, "neg_mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return -acc / static_cast<double>(a.size());
}

LatentField axpy(double alpha, const LatentField& x, const LatentField& y) {
  require_same_shape(x, y, "axpy");
  LatentField out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + y[i];
  return out;
}

LatentField add(const LatentField& a, const LatentField& b) {
  require_same_shape(a, b, "add");
  LatentField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

LatentField subtract(const LatentField& a, const LatentField& b) {
  require_same_shape(a, b, "subtract");
  LatentField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

LatentField scale(double alpha, const LatentField& x) {
  LatentField out = x;
  for (double& v : out.values()) v *= alpha;
  return out;
}

LatentField linear_combination(double alpha, const LatentField& x, double beta, const LatentField& y) {
  require_same_shape(x, y, "linear_combination");
  LatentField out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
  return out;
}

LatentField slice_dims(const LatentField& x, std::size_t begin, std::size_t end) {
  if (begin >= end || end > x.frame_dim()) {
    throw Error(ErrorCategory::shape, "slice_dims: invalid column range");
  }
  LatentField out(x.frames(), end - begin);
  for (std::size_t f = 0; f < x.frames(); ++f) {
    for (std::size_t k = begin; k < end; ++k) out.at(f, k - begin) = x.at(f, k);
  }
  return out;
}

LatentField first_frame(const LatentField& x) {
  const auto f0 = x.frame(0);
  return LatentField(1, x.frame_dim(), std::vector<double>(f0.begin(), f0.end()));
}

}  // namespace dynaedit
