#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynaedit/tensorcore/latent_field.hpp"
#include "dynaedit/tensorcore/rng.hpp"

namespace dynaedit {

inline constexpr double kMinVariance = 1e-8;

// One diagonal-covariance Gaussian of a mixture.
struct GaussianComponent {
  double weight = 1.0;
  LatentField mean;
  std::vector<double> var;  // per-coordinate, same length as mean
};

// Data law of X0 for one condition label: a diagonal Gaussian mixture. All
// components share the (frames x frame_dim) shape and weights sum to one.
class ConditionedMixture {
 public:
  ConditionedMixture(std::string condition_id, std::vector<GaussianComponent> components);

  const std::string& condition_id() const noexcept { return condition_id_; }
  const std::vector<GaussianComponent>& components() const noexcept { return components_; }
  std::size_t frames() const noexcept { return components_.front().mean.frames(); }
  std::size_t frame_dim() const noexcept { return components_.front().mean.frame_dim(); }
  std::size_t dims() const noexcept { return components_.front().mean.size(); }

  // Prior mean sum_k w_k mu_k.
  LatentField mean() const;

 private:
  std::string condition_id_;
  std::vector<GaussianComponent> components_;
};

// Prompt label plus an optional frame-0 pin (a 1 x frame_dim field).
struct Condition {
  std::string prompt;
  std::optional<LatentField> first_frame;

  friend bool operator==(const Condition&, const Condition&) = default;
};

// Mixture of X0 given frame 0 of X0 equals `f` (length frame_dim). Pinned
// coordinates get mean f and variance kMinVariance; components are reweighted
// by their frame-0 marginal density at f. Components whose weight underflows
// to zero are dropped.
ConditionedMixture condition_on_first_frame(const ConditionedMixture& mix, const LatentField& f);

// E[X0 | X_t = x] where X_t = (1-t) X0 + t X1, X1 ~ N(0, I). Requires 0 < t <= 1.
LatentField posterior_x0_mean(const ConditionedMixture& mix, const LatentField& x, double t);

// log p_t(x) of the interpolant X_t, including normalizing constants.
double interpolant_log_density(const ConditionedMixture& mix, const LatentField& x, double t);

// An exact draw of X0 from the mixture.
LatentField draw(const ConditionedMixture& mix, RngStream& stream);

}  // namespace dynaedit
