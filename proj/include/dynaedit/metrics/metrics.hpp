#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynaedit/editor/edit_trace.hpp"
#include "dynaedit/flowmodel/mixture.hpp"

namespace dynaedit {

// Mean squared second temporal difference:
//   (1 / ((T - 2) d)) sum_f |z_{f+1} - 2 z_f + z_{f-1}|^2
// Requires T >= 3 (Error{too_few_frames}).
double jitter_energy(const LatentField& z);

// Temporal moving average where frame f averages every frame g with
// |g - f| < window, truncated at the ends. window = 1 is the identity and
// window = T gives the global temporal mean on every frame.
LatentField moving_average(const LatentField& z, std::size_t window);

// sqrt((1/T) sum_f |MA(z)_f - MA(x_src)_f|^2)
double lowfreq_alignment(const LatentField& z, const LatentField& x_src, std::size_t window);

// max(3, T / 4), capped at T.
std::size_t default_window(std::size_t frames) noexcept;

// All-pairs (V-statistic) energy distance
//   2 E|A - B| - E|A - A'| - E|B - B'|,
// which is zero for identical multisets and never negative.
double energy_distance(std::span<const LatentField> a, std::span<const LatentField> b);

// RMS distance from z to the nearest component mean of `target`.
double target_distance(const LatentField& z, const ConditionedMixture& target);

struct CorrelationTrace {
  std::vector<double> noise;     // slot-1 noise cosine between consecutive steps
  std::vector<double> velocity;  // aggregated velocity cosine between consecutive steps
};

// Requires at least two recorded steps (Error{trace_too_short}). Undefined
// velocity cosines (a zero velocity) are reported as 0.
CorrelationTrace correlation_trace(const EditTrace& trace);

// 1 - mean consecutive velocity cosine over the last half of the trace.
double late_velocity_dispersion(const CorrelationTrace& corr);

struct MetricReport {
  double jitter = 0.0;
  double lowfreq_alignment = 0.0;
  double target_distance = 0.0;
  std::vector<double> noise_corr;
  std::vector<double> velocity_corr;
};

// Scalar metrics of an endpoint z against x_src and the target law, plus the
// correlation arrays of `trace` (left empty when the trace has fewer than two
// steps). The moving-average window is default_window(T).
MetricReport measure(const LatentField& z, const LatentField& x_src, const ConditionedMixture& target,
                     const EditTrace& trace);

}  // namespace dynaedit
