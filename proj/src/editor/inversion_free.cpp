#include "dynaedit/editor/inversion_free.hpp"

#include <optional>

#include "dynaedit/editor/noise_bank.hpp"
#include "dynaedit/editor/sga.hpp"
#include "dynaedit/error.hpp"
#include "dynaedit/flowmodel/time_grid.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

namespace {

std::optional<double> cosine_if_defined(const LatentField& a, const LatentField& b) {
  if (norm(a) < 1e-12 || norm(b) < 1e-12) return std::nullopt;
  return cosine_sim(a, b);
}

std::vector<double> slotwise_cosine(const std::vector<LatentField>& now,
                                    const std::vector<LatentField>& before) {
  std::vector<double> out;
  const std::size_t n = std::min(now.size(), before.size());
  for (std::size_t j = 0; j < n; ++j) out.push_back(cosine_if_defined(now[j], before[j]).value_or(0.0));
  return out;
}

// Shared bookkeeping for the two inversion-free loops.
class TraceRecorder {
 public:
  explicit TraceRecorder(std::size_t snapshot_stride) : stride_(snapshot_stride) {}

  void record(EditStepRecord rec, const std::vector<LatentField>& noises, const LatentField& velocity,
              const LatentField& z_after) {
    rec.velocity_norm = norm(velocity);
    if (!prev_noises_.empty()) rec.noise_cosine = slotwise_cosine(noises, prev_noises_);
    if (prev_velocity_) rec.velocity_cosine = cosine_if_defined(velocity, *prev_velocity_);
    if (stride_ > 0 && rec.step % stride_ == 0) rec.snapshot = z_after;
    prev_noises_ = noises;
    prev_velocity_ = velocity;
    trace_.steps.push_back(std::move(rec));
  }

  EditTrace take() { return std::move(trace_); }

 private:
  std::size_t stride_;
  std::vector<LatentField> prev_noises_;
  std::optional<LatentField> prev_velocity_;
  EditTrace trace_;
};

}  // namespace

LatentField noisy_source(const LatentField& x_src, const LatentField& w, double t) {
  return linear_combination(1.0 - t, x_src, t, w);
}

LatentField noisy_target(const LatentField& z_edit, const LatentField& z_src, const LatentField& x_src) {
  require_same_shape(z_edit, z_src, "noisy_target");
  require_same_shape(z_edit, x_src, "noisy_target");
  LatentField out = z_src;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = z_src[i] + (z_edit[i] - x_src[i]);
  return out;
}

LatentField velocity_difference(const LatentField& z_tar, const LatentField& z_src, double t,
                                const VelocityField& source, const VelocityField& target) {
  if (!(t > 0.0)) throw Error(ErrorCategory::degenerate_input, "velocity_difference: t must be > 0");
  return subtract(target(z_tar, t), source(z_src, t));
}

LatentField velocity_difference(const LatentField& z_tar, const LatentField& z_src, double t,
                                const MixtureRegistry& registry, const Condition& cond_src,
                                const Condition& cond_tar, double cfg_src, double cfg_tar) {
  return velocity_difference(z_tar, z_src, t, registry.field(cond_src, cfg_src),
                             registry.field(cond_tar, cfg_tar));
}

EditResult dyna_edit(const LatentField& x_src, const VelocityField& source, const VelocityField& target,
                    const EditConfig& config) {
  config.validate();
  const auto grid = make_time_grid(config.steps, config.shift);
  NoiseBank bank = make_noise_bank(config.resolved_bank_size(), x_src.frames(), x_src.frame_dim(),
                                   config.seed, config.anc.anchored());
  TraceRecorder recorder(config.snapshot_stride);
  LatentField z_edit = x_src;

  for (std::size_t i = config.n_max; i >= 1; --i) {
    const double t = grid[i];
    const double a = config.anc.coefficient(t, i == config.n_max);
    bank = config.anc.anchored() ? anchored_step(bank, a, i) : anc_step(bank, a, i);

    const std::size_t active = config.slots.count(i, config.steps);
    std::vector<LatentField> velocities;
    velocities.reserve(active);
    for (std::size_t j = 0; j < active; ++j) {
      const LatentField z_src = noisy_source(x_src, bank.slots[j], t);
      const LatentField z_tar = noisy_target(z_edit, z_src, x_src);
      velocities.push_back(velocity_difference(z_tar, z_src, t, source, target));
    }
    SgaResult agg = sga_aggregate(z_edit, velocities, t, x_src, config.tau, config.similarity);
    z_edit = axpy(grid[i - 1] - t, agg.velocity, z_edit);

    EditStepRecord rec;
    rec.step = i;
    rec.t = t;
    rec.anc_coefficient = a;
    rec.active_slots = active;
    rec.similarities = std::move(agg.similarities);
    rec.weights = std::move(agg.weights);
    recorder.record(std::move(rec), bank.slots, agg.velocity, z_edit);
  }
  return {std::move(z_edit), recorder.take()};
}

EditResult flow_edit(const LatentField& x_src, const VelocityField& source, const VelocityField& target,
                    const EditConfig& config) {
  config.validate();
  const auto grid = make_time_grid(config.steps, config.shift);
  TraceRecorder recorder(config.snapshot_stride);
  LatentField z_edit = x_src;

  for (std::size_t i = config.n_max; i >= 1; --i) {
    const double t = grid[i];
    const std::size_t n_avg = config.slots.count(i, config.steps);
    std::vector<LatentField> noises;
    std::vector<LatentField> velocities;
    for (std::size_t j = 0; j < n_avg; ++j) {
      noises.push_back(fresh_noise(config.seed, j, i, x_src.frames(), x_src.frame_dim()));
      const LatentField z_src = noisy_source(x_src, noises.back(), t);
      const LatentField z_tar = noisy_target(z_edit, z_src, x_src);
      velocities.push_back(velocity_difference(z_tar, z_src, t, source, target));
    }
    const std::vector<double> uniform(n_avg, 1.0 / static_cast<double>(n_avg));
    const LatentField mean_velocity = combine_velocities(velocities, uniform);
    z_edit = axpy(grid[i - 1] - t, mean_velocity, z_edit);

    EditStepRecord rec;
    rec.step = i;
    rec.t = t;
    rec.active_slots = n_avg;
    rec.weights = uniform;
    recorder.record(std::move(rec), noises, mean_velocity, z_edit);
  }
  return {std::move(z_edit), recorder.take()};
}

EditResult dyna_edit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_src,
                    const Condition& cond_tar, const EditConfig& config) {
  return dyna_edit(x_src, registry.field(cond_src, config.cfg_src), registry.field(cond_tar, config.cfg_tar),
                  config);
}

EditResult flow_edit(const LatentField& x_src, const MixtureRegistry& registry, const Condition& cond_src,
                    const Condition& cond_tar, const EditConfig& config) {
  return flow_edit(x_src, registry.field(cond_src, config.cfg_src), registry.field(cond_tar, config.cfg_tar),
                  config);
}

}  // namespace dynaedit
