#pragma once

#include "dynaedit/editor/edit_config.hpp"
#include "dynaedit/editor/edit_trace.hpp"
#include "dynaedit/flowmodel/velocity_field.hpp"

namespace dynaedit {

struct EditResult {
  LatentField edited;
  EditTrace trace;
};

// (1 - t) x_src + t w
LatentField noisy_source(const LatentField& x_src, const LatentField& w, double t);

// z_edit + z_src - x_src, evaluated as z_src + (z_edit - x_src) so that an
// unedited state reproduces z_src exactly.
LatentField noisy_target(const LatentField& z_edit, const LatentField& z_src, const LatentField& x_src);

// V_tar(z_tar, t) - V_src(z_src, t)
LatentField velocity_difference(const LatentField& z_tar, const LatentField& z_src, double t,
                                const VelocityField& source, const VelocityField& target);

LatentField velocity_difference(const LatentField& z_tar, const LatentField& z_src, double t,
                                const MixtureRegistry& registry, const Condition& cond_src,
                                const Condition& cond_tar, double cfg_src, double cfg_tar);

// Inversion-free edit with correlated noise (ANC) and similarity-guided
// aggregation over the active slots.
EditResult dyna_edit(const LatentField& x_src, const VelocityField& source, const VelocityField& target,
                    const EditConfig& config);

// Inversion-free edit with i.i.d. noise per step and slot and a plain average
// over the active slots. The slot schedule plays the role of n_avg.
EditResult flow_edit(const LatentField& x_src, const VelocityField& source, const VelocityField& target,
                    const EditConfig& config);

EditResult dyna_edit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_src,
                    const Condition& cond_tar, const EditConfig& config);

EditResult flow_edit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_src,
                    const Condition& cond_tar, const EditConfig& config);

}  // namespace dynaedit
