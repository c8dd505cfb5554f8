#include "dynaedit/harness/scenarios.hpp"

#include <cmath>

#include "dynaedit/error.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

namespace {

constexpr std::uint64_t kSourceTag = 0x53524358u;  // "SRCX"

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) h = (h ^ c) * 0x100000001B3ull;
  return h;
}

// Normalized time of frame f in [0, 1].
double frame_time(std::size_t f, std::size_t frames) {
  return frames > 1 ? static_cast<double>(f) / static_cast<double>(frames - 1) : 0.0;
}

GaussianComponent component(double weight, LatentField mean, double variance) {
  std::vector<double> var(mean.size(), variance);
  return GaussianComponent{weight, std::move(mean), std::move(var)};
}

// Parabolic bump of height `height` over [begin, end] in normalized time.
double arc(double u, double begin, double end, double height) {
  if (u <= begin || u >= end) return 0.0;
  const double s = (u - begin) / (end - begin);
  return 4.0 * height * s * (1.0 - s);
}

}  // namespace

LatentField Scenario::source_sample(std::uint64_t seed) const {
  RngStream stream{seed, derive_stream_id({kSourceTag, fnv1a(name)}), 0};
  return draw(registry.get(source_label), stream);
}

Condition Scenario::source_condition(const LatentField& x_src) const {
  Condition c{source_label, std::nullopt};
  if (condition_on_first_frame) c.first_frame = first_frame(x_src);
  return c;
}

Condition Scenario::target_condition(const LatentField& x_src) const {
  Condition c{target_label, std::nullopt};
  if (condition_on_first_frame) c.first_frame = first_frame(x_src);
  return c;
}

ConditionedMixture Scenario::target_law(const LatentField& x_src) const {
  return registry.resolve(target_condition(x_src));
}

Scenario make_mean_shift_scenario(double offset) {
  constexpr std::size_t T = 8;
  constexpr std::size_t d = 4;
  constexpr double kVar = 0.1;
  LatentField mu(T, d);
  for (std::size_t f = 0; f < T; ++f) {
    for (std::size_t k = 0; k < d; ++k) mu.at(f, k) = 0.5 * std::sin(0.5 * static_cast<double>(f) + static_cast<double>(k));
  }
  LatentField shifted = mu;
  for (double& v : shifted.values()) v += offset;

  Scenario s;
  s.name = "mean-shift";
  s.description = "single Gaussian source and target differing by a constant offset on every frame";
  s.frames = T;
  s.frame_dim = d;
  s.registry.add(ConditionedMixture("source", {component(1.0, mu, kVar)}));
  s.registry.add(ConditionedMixture("target", {component(1.0, shifted, kVar)}));
  s.source_label = "source";
  s.target_label = "target";
  s.condition_on_first_frame = false;
  return s;
}

Scenario make_trajectory_jump_scenario() {
  constexpr std::size_t T = 16;
  constexpr std::size_t d = 2;
  constexpr double kVar = 0.0025;
  const std::vector<double> speeds = {1.5, 2.0, 2.5};
  const std::vector<double> heights = {0.8, 1.2};
  const std::vector<double> jump_starts = {0.2, 0.35, 0.5};
  constexpr double kJumpLength = 0.35;

  std::vector<GaussianComponent> lines;
  for (double v : speeds) {
    LatentField m(T, d);
    for (std::size_t f = 0; f < T; ++f) m.at(f, 0) = v * frame_time(f, T);
    lines.push_back(component(1.0 / static_cast<double>(speeds.size()), std::move(m), kVar));
  }
  std::vector<GaussianComponent> arcs;
  const double w = 1.0 / static_cast<double>(speeds.size() * heights.size() * jump_starts.size());
  for (double v : speeds) {
    for (double h : heights) {
      for (double b : jump_starts) {
        LatentField m(T, d);
        for (std::size_t f = 0; f < T; ++f) {
          const double u = frame_time(f, T);
          m.at(f, 0) = v * u;
          m.at(f, 1) = arc(u, b, b + kJumpLength, h);
        }
        arcs.push_back(component(w, std::move(m), kVar));
      }
    }
  }

  Scenario s;
  s.name = "trajectory-jump";
  s.description = "2-D point paths: straight runs edited into parabolic jumps from the same first frame";
  s.frames = T;
  s.frame_dim = d;
  s.registry.add(ConditionedMixture("run", std::move(lines)));
  s.registry.add(ConditionedMixture("jump", std::move(arcs)));
  s.source_label = "run";
  s.target_label = "jump";
  return s;
}

Scenario make_two_object_scenario() {
  constexpr std::size_t T = 12;
  constexpr std::size_t d = 4;  // object A in columns 0-1, object B in columns 2-3
  constexpr double kVar = 0.0025;
  const std::vector<double> b_angles = {-0.6, 0.0, 0.6};
  const std::vector<double> a_lifts = {-0.8, 0.8, 1.6};

  std::vector<GaussianComponent> source;
  std::vector<GaussianComponent> target;
  const double w = 1.0 / static_cast<double>(b_angles.size());
  for (std::size_t k = 0; k < b_angles.size(); ++k) {
    LatentField src(T, d);
    LatentField tar(T, d);
    for (std::size_t f = 0; f < T; ++f) {
      const double u = frame_time(f, T);
      const double bx = 1.5 * u * std::cos(b_angles[k]);
      const double by = 1.5 * u * std::sin(b_angles[k]);
      src.at(f, 0) = 1.5 * u;
      src.at(f, 1) = 0.0;
      src.at(f, 2) = bx;
      src.at(f, 3) = by;
      tar.at(f, 0) = 1.5 * u;
      tar.at(f, 1) = a_lifts[k] * u * u;
      tar.at(f, 2) = bx;
      tar.at(f, 3) = by;
    }
    source.push_back(component(w, std::move(src), kVar));
    target.push_back(component(w, std::move(tar), kVar));
  }

  Scenario s;
  s.name = "two-object";
  s.description = "object A must change its path; object B has the same law under both conditions";
  s.frames = T;
  s.frame_dim = d;
  s.registry.add(ConditionedMixture("steady", std::move(source)));
  s.registry.add(ConditionedMixture("a-turns", std::move(target)));
  s.source_label = "steady";
  s.target_label = "a-turns";
  s.preserved_block = DimRange{2, 4};
  return s;
}

Scenario make_bimodal_target_scenario() {
  constexpr std::size_t T = 8;
  constexpr std::size_t d = 2;
  constexpr double kVar = 0.0025;
  LatentField line(T, d);
  LatentField up(T, d);
  LatentField down(T, d);
  for (std::size_t f = 0; f < T; ++f) {
    const double u = frame_time(f, T);
    line.at(f, 0) = up.at(f, 0) = down.at(f, 0) = 2.0 * u;
    up.at(f, 1) = 1.5 * u;
    down.at(f, 1) = -1.5 * u;
  }

  Scenario s;
  s.name = "bimodal-target";
  s.description = "one source path; the target law has two well separated outcomes";
  s.frames = T;
  s.frame_dim = d;
  s.registry.add(ConditionedMixture("straight", {component(1.0, line, kVar)}));
  s.registry.add(ConditionedMixture("veer", {component(0.5, up, kVar), component(0.5, down, kVar)}));
  s.source_label = "straight";
  s.target_label = "veer";
  return s;
}

std::vector<Scenario> builtin_scenarios() {
  return {make_mean_shift_scenario(1.0), make_trajectory_jump_scenario(), make_two_object_scenario(),
          make_bimodal_target_scenario()};
}

Scenario find_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCategory::config, "unknown scenario '" + name + "'");
}

}  // namespace dynaedit
