#include "dynaedit/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynaedit/error.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

double jitter_energy(const LatentField& z) {
  const std::size_t T = z.frames();
  const std::size_t d = z.frame_dim();
  if (T < 3) throw Error(ErrorCategory::too_few_frames, "jitter_energy needs at least 3 frames");
  double acc = 0.0;
  for (std::size_t f = 1; f + 1 < T; ++f) {
    for (std::size_t k = 0; k < d; ++k) {
      const double second = z.at(f + 1, k) - 2.0 * z.at(f, k) + z.at(f - 1, k);
      acc += second * second;
    }
  }
  return acc / static_cast<double>((T - 2) * d);
}

LatentField moving_average(const LatentField& z, std::size_t window) {
  const std::size_t T = z.frames();
  if (window < 1 || window > T) throw Error(ErrorCategory::config, "moving average window must lie in [1, T]");
  const std::size_t reach = window - 1;
  LatentField out = LatentField::zeros_like(z);
  for (std::size_t f = 0; f < T; ++f) {
    const std::size_t lo = f >= reach ? f - reach : 0;
    const std::size_t hi = std::min(T - 1, f + reach);
    const double count = static_cast<double>(hi - lo + 1);
    for (std::size_t k = 0; k < z.frame_dim(); ++k) {
      double acc = 0.0;
      for (std::size_t g = lo; g <= hi; ++g) acc += z.at(g, k);
      out.at(f, k) = acc / count;
    }
  }
  return out;
}

double lowfreq_alignment(const LatentField& z, const LatentField& x_src, std::size_t window) {
  require_same_shape(z, x_src, "lowfreq_alignment");
  const LatentField mz = moving_average(z, window);
  const LatentField mx = moving_average(x_src, window);
  return std::sqrt(squared_norm(subtract(mz, mx)) / static_cast<double>(z.frames()));
}

std::size_t default_window(std::size_t frames) noexcept {
  return std::min(frames, std::max<std::size_t>(3, frames / 4));
}

namespace {

double mean_pairwise_distance(std::span<const LatentField> a, std::span<const LatentField> b) {
  double acc = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        d2 += diff * diff;
      }
      acc += std::sqrt(d2);
    }
  }
  return acc / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

double energy_distance(std::span<const LatentField> a, std::span<const LatentField> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCategory::degenerate_input, "energy_distance: empty sample set");
  for (const auto& x : a) require_same_shape(x, a.front(), "energy_distance");
  for (const auto& y : b) require_same_shape(y, a.front(), "energy_distance");
  const double cross = mean_pairwise_distance(a, b);
  const double within_a = mean_pairwise_distance(a, a);
  const double within_b = mean_pairwise_distance(b, b);
  return std::max(0.0, 2.0 * cross - within_a - within_b);
}

double target_distance(const LatentField& z, const ConditionedMixture& target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : target.components()) {
    best = std::min(best, squared_norm(subtract(z, c.mean)));
  }
  return std::sqrt(best / static_cast<double>(z.size()));
}

CorrelationTrace correlation_trace(const EditTrace& trace) {
  if (trace.steps.size() < 2) {
    throw Error(ErrorCategory::trace_too_short, "correlation_trace needs at least two steps");
  }
  CorrelationTrace out;
  for (std::size_t s = 1; s < trace.steps.size(); ++s) {
    const auto& rec = trace.steps[s];
    out.noise.push_back(rec.noise_cosine.empty() ? 0.0 : rec.noise_cosine.front());
    out.velocity.push_back(rec.velocity_cosine.value_or(0.0));
  }
  return out;
}

double late_velocity_dispersion(const CorrelationTrace& corr) {
  if (corr.velocity.empty()) throw Error(ErrorCategory::trace_too_short, "empty correlation trace");
  const std::size_t begin = corr.velocity.size() / 2;
  double acc = 0.0;
  for (std::size_t i = begin; i < corr.velocity.size(); ++i) acc += corr.velocity[i];
  return 1.0 - acc / static_cast<double>(corr.velocity.size() - begin);
}

MetricReport measure(const LatentField& z, const LatentField& x_src, const ConditionedMixture& target,
                     const EditTrace& trace) {
  MetricReport r;
  r.jitter = jitter_energy(z);
  r.lowfreq_alignment = lowfreq_alignment(z, x_src, default_window(z.frames()));
  r.target_distance = target_distance(z, target);
  if (trace.steps.size() >= 2) {
    auto corr = correlation_trace(trace);
    r.noise_corr = std::move(corr.noise);
    r.velocity_corr = std::move(corr.velocity);
  }
  return r;
}

}  // namespace dynaedit
