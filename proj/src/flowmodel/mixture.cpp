#include "dynaedit/flowmodel/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dynaedit/error.hpp"

namespace dynaedit {

namespace {

constexpr double kWeightTolerance = 1e-12;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double log_sum_exp(const std::vector<double>& values) {
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

// Per-component log N(x; (1-t) mu_k, (1-t)^2 Sigma_k + t^2 I), without the
// 2*pi constant, plus log w_k.
std::vector<double> component_log_scores(const ConditionedMixture& mix, const LatentField& x,
                                         double t) {
  const double a = 1.0 - t;
  const double t2 = t * t;
  const auto& comps = mix.components();
  std::vector<double> scores(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    double quad = 0.0;
    double logdet = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s2 = a * a * c.var[i] + t2;
      const double diff = x[i] - a * c.mean[i];
      quad += diff * diff / s2;
      logdet += std::log(s2);
    }
    scores[k] = std::log(c.weight) - 0.5 * (quad + logdet);
  }
  return scores;
}

void check_time(double t, const char* where) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw Error(ErrorCategory::degenerate_input, std::string(where) + ": t must lie in (0, 1]");
  }
}

}  // namespace

ConditionedMixture::ConditionedMixture(std::string condition_id,
                                       std::vector<GaussianComponent> components)
    : condition_id_(std::move(condition_id)), components_(std::move(components)) {
  if (components_.empty()) {
    throw Error(ErrorCategory::config, "mixture '" + condition_id_ + "' has no components");
  }
  const LatentField& ref = components_.front().mean;
  double total = 0.0;
  for (const auto& c : components_) {
    if (!c.mean.same_shape(ref) || c.var.size() != c.mean.size()) {
      throw Error(ErrorCategory::shape, "mixture '" + condition_id_ + "': component shape mismatch");
    }
    if (!(c.weight > 0.0 && c.weight <= 1.0)) {
      throw Error(ErrorCategory::config, "mixture '" + condition_id_ + "': weight outside (0, 1]");
    }
    for (double v : c.var) {
      if (!(v >= kMinVariance) || !std::isfinite(v)) {
        throw Error(ErrorCategory::config, "mixture '" + condition_id_ + "': variance below 1e-8");
      }
    }
    if (!c.mean.all_finite()) {
      throw Error(ErrorCategory::config, "mixture '" + condition_id_ + "': non-finite mean");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw Error(ErrorCategory::config, "mixture '" + condition_id_ + "': weights do not sum to 1");
  }
}

LatentField ConditionedMixture::mean() const {
  LatentField out = LatentField::zeros_like(components_.front().mean);
  for (const auto& c : components_) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c.weight * c.mean[i];
  }
  return out;
}

ConditionedMixture condition_on_first_frame(const ConditionedMixture& mix, const LatentField& f) {
  const std::size_t d = mix.frame_dim();
  if (f.size() != d) {
    throw Error(ErrorCategory::shape, "condition_on_first_frame: first frame must have length " +
                                          std::to_string(d));
  }
  const auto& comps = mix.components();
  std::vector<double> log_w(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    double lp = std::log(comps[k].weight);
    for (std::size_t i = 0; i < d; ++i) {
      const double v = comps[k].var[i];
      const double diff = f[i] - comps[k].mean[i];
      lp -= 0.5 * (diff * diff / v + std::log(v) + kLog2Pi);
    }
    log_w[k] = lp;
  }
  const double lse = log_sum_exp(log_w);
  if (!std::isfinite(lse)) {
    throw Error(ErrorCategory::degenerate_condition,
                "condition_on_first_frame: first frame has zero density under '" +
                    mix.condition_id() + "'");
  }

  std::vector<GaussianComponent> out;
  out.reserve(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const double w = std::exp(log_w[k] - lse);
    if (w <= 0.0) continue;
    GaussianComponent c = comps[k];
    c.weight = w;
    for (std::size_t i = 0; i < d; ++i) {
      c.mean[i] = f[i];
      c.var[i] = kMinVariance;
    }
    out.push_back(std::move(c));
  }
  // Renormalize the survivors so the sum is 1 to rounding.
  double total = 0.0;
  for (const auto& c : out) total += c.weight;
  for (auto& c : out) c.weight = std::min(1.0, c.weight / total);
  return ConditionedMixture(mix.condition_id(), std::move(out));
}

LatentField posterior_x0_mean(const ConditionedMixture& mix, const LatentField& x, double t) {
  check_time(t, "posterior_x0_mean");
  if (x.size() != mix.dims()) throw Error(ErrorCategory::shape, "posterior_x0_mean: shape mismatch");
  const std::vector<double> scores = component_log_scores(mix, x, t);
  const double lse = log_sum_exp(scores);

  const double a = 1.0 - t;
  const double t2 = t * t;
  LatentField out = LatentField::zeros_like(x);
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double r = std::exp(scores[k] - lse);
    if (r == 0.0) continue;
    const auto& c = mix.components()[k];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s2 = a * a * c.var[i] + t2;
      const double gain = a * c.var[i] / s2;
      out[i] += r * (c.mean[i] + gain * (x[i] - a * c.mean[i]));
    }
  }
  return out;
}

double interpolant_log_density(const ConditionedMixture& mix, const LatentField& x, double t) {
  check_time(t, "interpolant_log_density");
  if (x.size() != mix.dims()) throw Error(ErrorCategory::shape, "interpolant_log_density: shape mismatch");
  return log_sum_exp(component_log_scores(mix, x, t)) - 0.5 * static_cast<double>(x.size()) * kLog2Pi;
}

LatentField draw(const ConditionedMixture& mix, RngStream& stream) {
  const auto& comps = mix.components();
  const double u = next_uniform(stream);
  std::size_t pick = comps.size() - 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    cumulative += comps[k].weight;
    if (u < cumulative) {
      pick = k;
      break;
    }
  }
  const auto& c = comps[pick];
  LatentField noise = gaussian(stream, c.mean.frames(), c.mean.frame_dim());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = c.mean[i] + std::sqrt(c.var[i]) * noise[i];
  return noise;
}

}  // namespace dynaedit
