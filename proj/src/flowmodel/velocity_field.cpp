#include "dynaedit/flowmodel/velocity_field.hpp"

#include "dynaedit/error.hpp"

namespace dynaedit {

VelocityField VelocityField::zero() {
  return VelocityField([](const LatentField& x, double) { return LatentField::zeros_like(x); });
}

LatentField mixture_velocity(const ConditionedMixture& mix, const LatentField& x, double t) {
  LatentField out = posterior_x0_mean(mix, x, t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (x[i] - out[i]) / t;
  return out;
}

LatentField guide(const LatentField& v_uncond, const LatentField& v_cond, double cfg_scale) {
  if (cfg_scale == 1.0) return v_cond;
  require_same_shape(v_uncond, v_cond, "guide");
  LatentField out = v_uncond;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = v_uncond[i] + cfg_scale * (v_cond[i] - v_uncond[i]);
  }
  return out;
}

void MixtureRegistry::add(ConditionedMixture mix, double prior_weight) {
  if (!(prior_weight > 0.0)) throw Error(ErrorCategory::config, "prior weight must be positive");
  if (!entries_.empty()) {
    const auto& ref = entries_.begin()->second.mixture;
    if (ref.frames() != mix.frames() || ref.frame_dim() != mix.frame_dim()) {
      throw Error(ErrorCategory::shape, "registry: mixture '" + mix.condition_id() + "' shape mismatch");
    }
  }
  std::string label = mix.condition_id();
  entries_.insert_or_assign(std::move(label), Entry{std::move(mix), prior_weight});
}

const ConditionedMixture& MixtureRegistry::get(const std::string& label) const {
  const auto it = entries_.find(label);
  if (it == entries_.end()) {
    throw Error(ErrorCategory::unknown_condition, "unknown condition '" + label + "'");
  }
  return it->second.mixture;
}

std::vector<std::string> MixtureRegistry::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, entry] : entries_) out.push_back(label);
  return out;
}

ConditionedMixture MixtureRegistry::unconditional() const {
  if (entries_.empty()) throw Error(ErrorCategory::unknown_condition, "registry is empty");
  double prior_total = 0.0;
  for (const auto& [label, entry] : entries_) prior_total += entry.prior_weight;
  std::vector<GaussianComponent> comps;
  for (const auto& [label, entry] : entries_) {
    for (const auto& c : entry.mixture.components()) {
      GaussianComponent u = c;
      u.weight = c.weight * entry.prior_weight / prior_total;
      comps.push_back(std::move(u));
    }
  }
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  for (auto& c : comps) c.weight /= total;
  return ConditionedMixture("<unconditional>", std::move(comps));
}

ConditionedMixture MixtureRegistry::resolve(const Condition& condition) const {
  const ConditionedMixture& base = get(condition.prompt);
  if (!condition.first_frame) return base;
  return condition_on_first_frame(base, *condition.first_frame);
}

ConditionedMixture MixtureRegistry::resolve_unconditional(const Condition& condition) const {
  ConditionedMixture base = unconditional();
  if (!condition.first_frame) return base;
  return condition_on_first_frame(base, *condition.first_frame);
}

VelocityField MixtureRegistry::field(const Condition& condition, double cfg_scale) const {
  if (!(cfg_scale >= 0.0)) throw Error(ErrorCategory::config, "cfg_scale must be >= 0");
  auto cond = std::make_shared<const ConditionedMixture>(resolve(condition));
  if (cfg_scale == 1.0) {
    return VelocityField([cond](const LatentField& x, double t) { return mixture_velocity(*cond, x, t); });
  }
  auto uncond = std::make_shared<const ConditionedMixture>(resolve_unconditional(condition));
  return VelocityField([cond, uncond, cfg_scale](const LatentField& x, double t) {
    return guide(mixture_velocity(*uncond, x, t), mixture_velocity(*cond, x, t), cfg_scale);
  });
}

LatentField velocity(const VelocityQuery& query, const MixtureRegistry& registry) {
  if (!(query.t > 0.0)) throw Error(ErrorCategory::degenerate_input, "velocity: t must be > 0");
  return registry.field(query.condition, query.cfg_scale)(query.x, query.t);
}

}  // namespace dynaedit
