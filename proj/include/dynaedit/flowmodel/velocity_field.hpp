#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "dynaedit/flowmodel/mixture.hpp"

namespace dynaedit {

// A time-dependent drift V(x, t). Copies share the underlying callable, which
// must be pure so that fields can be evaluated from any thread.
class VelocityField {
 public:
  using Fn = std::function<LatentField(const LatentField&, double)>;

  VelocityField() = default;
  explicit VelocityField(Fn fn) : fn_(std::make_shared<const Fn>(std::move(fn))) {}

  LatentField operator()(const LatentField& x, double t) const { return (*fn_)(x, t); }

  static VelocityField zero();

 private:
  std::shared_ptr<const Fn> fn_;
};

// Exact rectified-flow velocity of a mixture: (x - E[X0 | X_t = x]) / t.
LatentField mixture_velocity(const ConditionedMixture& mix, const LatentField& x, double t);

// Registered condition laws. The unconditional law used by classifier-free
// guidance is the prior-weighted union of every registered mixture.
class MixtureRegistry {
 public:
  void add(ConditionedMixture mix, double prior_weight = 1.0);

  bool contains(const std::string& label) const { return entries_.count(label) != 0; }
  const ConditionedMixture& get(const std::string& label) const;
  std::vector<std::string> labels() const;

  ConditionedMixture unconditional() const;

  // Conditional law for (prompt, first frame).
  ConditionedMixture resolve(const Condition& condition) const;
  // Unconditional law, with the same first-frame pin as `condition`.
  ConditionedMixture resolve_unconditional(const Condition& condition) const;

  // V_u + cfg * (V_c - V_u); exactly V_c when cfg == 1.
  VelocityField field(const Condition& condition, double cfg_scale) const;

 private:
  struct Entry {
    ConditionedMixture mixture;
    double prior_weight;
  };
  std::map<std::string, Entry> entries_;
};

struct VelocityQuery {
  LatentField x;
  double t = 1.0;
  Condition condition;
  double cfg_scale = 1.0;
};

LatentField velocity(const VelocityQuery& query, const MixtureRegistry& registry);

// Applies classifier-free guidance to two already evaluated velocities.
LatentField guide(const LatentField& v_uncond, const LatentField& v_cond, double cfg_scale);

}  // namespace dynaedit
