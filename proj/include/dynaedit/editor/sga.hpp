#pragma once

#include <span>
#include <vector>

#include "dynaedit/editor/edit_config.hpp"
#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

// Endpoint predicted by taking one step of length t with velocity v: z - t v.
LatentField edit_projection(const LatentField& z_edit, const LatentField& v, double t);

double similarity(SimilarityKind kind, const LatentField& a, const LatentField& b);

// softmax(scores / tau), computed with max subtraction. tau = +inf gives
// exactly uniform weights.
std::vector<double> softmax_weights(std::span<const double> scores, double tau);

// sum_j w_j v_j for weights summing to one, evaluated as
// v_a + sum_{j != a} w_j (v_j - v_a) with a the first maximal weight. A
// one-hot weight vector returns v_a bit-exactly, and so does a set of equal
// velocities.
LatentField combine_velocities(std::span<const LatentField> velocities, std::span<const double> weights);

struct SgaResult {
  LatentField velocity;             // aggregated edit velocity
  LatentField combined_projection;  // sum_j w_j (z_edit - t v_j)
  std::vector<double> weights;
  std::vector<double> similarities;
};

// Similarity-guided aggregation of candidate edit velocities. Each candidate is
// projected to t = 0, scored against the source, and the softmax-weighted
// combination of projections is mapped back to a velocity, which equals the
// same weighted combination of the candidates.
SgaResult sga_aggregate(const LatentField& z_edit, std::span<const LatentField> velocities, double t,
                        const LatentField& x_src, double tau, SimilarityKind kind);

}  // namespace dynaedit
