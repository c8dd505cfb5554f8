#include "dynaedit/editor/sga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynaedit/error.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

LatentField edit_projection(const LatentField& z_edit, const LatentField& v, double t) {
  return axpy(-t, v, z_edit);
}

double similarity(SimilarityKind kind, const LatentField& a, const LatentField& b) {
  return kind == SimilarityKind::cosine ? cosine_sim(a, b) : neg_mse(a, b);
}

std::vector<double> softmax_weights(std::span<const double> scores, double tau) {
  if (scores.empty()) throw Error(ErrorCategory::degenerate_input, "softmax of an empty score list");
  if (!(tau > 0.0)) throw Error(ErrorCategory::config, "softmax temperature must be > 0");
  const std::size_t n = scores.size();
  if (std::isinf(tau)) return std::vector<double>(n, 1.0 / static_cast<double>(n));

  std::vector<double> logits(n);
  for (std::size_t j = 0; j < n; ++j) logits[j] = scores[j] / tau;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - peak);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

LatentField combine_velocities(std::span<const LatentField> velocities, std::span<const double> weights) {
  if (velocities.empty() || velocities.size() != weights.size()) {
    throw Error(ErrorCategory::degenerate_input, "combine_velocities: need one weight per velocity");
  }
  const std::size_t anchor =
      static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
  LatentField out = velocities[anchor];
  for (std::size_t j = 0; j < velocities.size(); ++j) {
    if (j == anchor || weights[j] == 0.0) continue;
    require_same_shape(out, velocities[j], "combine_velocities");
    const LatentField& v = velocities[j];
    const LatentField& base = velocities[anchor];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights[j] * (v[i] - base[i]);
  }
  return out;
}

SgaResult sga_aggregate(const LatentField& z_edit, std::span<const LatentField> velocities, double t,
                        const LatentField& x_src, double tau, SimilarityKind kind) {
  if (velocities.empty()) throw Error(ErrorCategory::degenerate_input, "sga_aggregate: no velocities");
  if (!(t > 0.0)) throw Error(ErrorCategory::degenerate_input, "sga_aggregate: t must be > 0");

  SgaResult result;
  result.similarities.reserve(velocities.size());
  std::vector<LatentField> projections;
  projections.reserve(velocities.size());
  for (const auto& v : velocities) {
    projections.push_back(edit_projection(z_edit, v, t));
    result.similarities.push_back(similarity(kind, x_src, projections.back()));
  }
  result.weights = softmax_weights(result.similarities, tau);

  result.combined_projection = LatentField::zeros_like(z_edit);
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const double w = result.weights[j];
    for (std::size_t i = 0; i < z_edit.size(); ++i) result.combined_projection[i] += w * projections[j][i];
  }
  // (z_edit - combined_projection) / t is the weighted velocity sum; the
  // direct form avoids the cancellation in z_edit - combined_projection.
  result.velocity = combine_velocities(velocities, result.weights);
  return result;
}

}  // namespace dynaedit
