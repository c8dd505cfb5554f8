#include "dynaedit/harness/study.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "dynaedit/editor/baselines.hpp"
#include "dynaedit/editor/inversion_free.hpp"
#include "dynaedit/flowmodel/sampler.hpp"
#include "dynaedit/harness/stats.hpp"
#include "dynaedit/harness/svg.hpp"
#include "dynaedit/tensorcore/rng.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace dynaedit {

namespace {

constexpr std::uint64_t kSampleTag = 0x53414D50u;  // "SAMP"
constexpr std::uint64_t kSdeditTag = 0x53444544u;  // "SDED"

std::string seed_file(std::uint64_t seed, const char* ext) { return "seed-" + std::to_string(seed) + ext; }

MetricRow make_row(std::uint64_t seed, const Scenario& scenario, const LatentField& z, const LatentField& x_src,
                   const MetricReport& report) {
  MetricRow row;
  row.seed = seed;
  row.jitter = report.jitter;
  row.lowfreq_alignment = report.lowfreq_alignment;
  row.target_distance = report.target_distance;
  if (scenario.preserved_block) {
    const auto [begin, end] = *scenario.preserved_block;
    row.preserved_lowfreq_alignment =
        lowfreq_alignment(slice_dims(z, begin, end), slice_dims(x_src, begin, end), default_window(z.frames()));
  }
  if (!report.velocity_corr.empty()) {
    row.velocity_dispersion = late_velocity_dispersion({report.noise_corr, report.velocity_corr});
    row.mean_noise_corr = mean(report.noise_corr);
    row.mean_velocity_corr = mean(report.velocity_corr);
  }
  return row;
}

// Mean over seeds of the per-step correlation arrays, truncated to the
// shortest one.
std::vector<double> mean_curve(const std::vector<SeedOutcome>& outcomes, bool noise) {
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (const auto& o : outcomes) {
    len = std::min(len, (noise ? o.report.noise_corr : o.report.velocity_corr).size());
  }
  if (outcomes.empty() || len == 0) return {};
  std::vector<double> out(len, 0.0);
  for (const auto& o : outcomes) {
    const auto& v = noise ? o.report.noise_corr : o.report.velocity_corr;
    for (std::size_t i = 0; i < len; ++i) out[i] += v[i];
  }
  for (double& v : out) v /= static_cast<double>(outcomes.size());
  return out;
}

void write_outputs(const StudyResult& result, const Scenario& scenario) {
  const auto& dir = result.spec.output_dir;
  write_text_file(dir / "study.json", study_spec_to_json(result.spec));
  std::vector<MetricRow> rows;
  for (const auto& o : result.outcomes) {
    rows.push_back(o.row);
    write_trace(dir / "traces" / seed_file(o.seed, ".jsonl"),
                TraceHeader{scenario.name, std::string(to_string(result.spec.method)), o.seed}, o.trace);
    write_latent(dir / "latents" / seed_file(o.seed, ".lat"), o.endpoint);
  }
  write_metrics_csv(dir / "metrics.csv", rows);

  PlotSeries jitter{"jitter", {}};
  PlotSeries lowfreq{"lowfreq_alignment", {}};
  PlotSeries target{"target_distance", {}};
  for (const auto& r : rows) {
    jitter.values.push_back(r.jitter);
    lowfreq.values.push_back(r.lowfreq_alignment);
    target.values.push_back(r.target_distance);
  }
  write_text_file(dir / "plots" / "metrics.svg",
                  strip_plot_svg(scenario.name + " / " + std::string(to_string(result.spec.method)),
                                 {jitter, lowfreq, target}));
  auto noise = mean_curve(result.outcomes, true);
  if (!noise.empty()) {
    write_text_file(dir / "plots" / "correlation.svg",
                    line_plot_svg("consecutive-step cosine (mean over seeds)", "step",
                                  {{"noise", noise}, {"velocity", mean_curve(result.outcomes, false)}}));
  }
}

}  // namespace

SeedOutcome run_seed(const Scenario& scenario, const StudySpec& spec, std::uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  out.x_src = spec.vary_source ? scenario.source_sample(seed) : scenario.source_sample();
  const Condition cond_src = scenario.source_condition(out.x_src);
  const Condition cond_tar = scenario.target_condition(out.x_src);
  EditConfig config = spec.edit;
  config.seed = seed;

  switch (spec.method) {
    case Method::dynaedit: {
      auto r = dyna_edit(out.x_src, scenario.registry, cond_src, cond_tar, config);
      out.endpoint = std::move(r.edited);
      out.trace = std::move(r.trace);
      break;
    }
    case Method::flowedit: {
      auto r = flow_edit(out.x_src, scenario.registry, cond_src, cond_tar, config);
      out.endpoint = std::move(r.edited);
      out.trace = std::move(r.trace);
      break;
    }
    case Method::sdedit: {
      RngStream stream{seed, derive_stream_id({kSdeditTag}), 0};
      out.endpoint = sdedit(out.x_src, scenario.registry, cond_tar, spec.sdedit_t_start, config.steps, stream,
                            config.cfg_tar);
      break;
    }
    case Method::ode_inversion:
      out.endpoint = ode_inversion(out.x_src, scenario.registry, cond_src, cond_tar, config.steps, config.cfg_src,
                                   config.cfg_tar);
      break;
    case Method::sample: {
      RngStream stream{seed, derive_stream_id({kSampleTag}), 0};
      SampleOptions options{config.steps, spec.sample_cfg, config.shift};
      out.endpoint = sample(scenario.registry, cond_tar, options, stream);
      break;
    }
  }
  out.report = measure(out.endpoint, out.x_src, scenario.target_law(out.x_src), out.trace);
  out.row = make_row(seed, scenario, out.endpoint, out.x_src, out.report);
  return out;
}

StudyResult run_study(const StudySpec& spec, unsigned threads) {
  spec.validate();
  const Scenario scenario = find_scenario(spec.scenario);
  StudyResult result;
  result.spec = spec;
  result.outcomes.resize(spec.seeds.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, spec.seeds.size()));

  if (threads <= 1) {
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) result.outcomes[i] = run_seed(scenario, spec, spec.seeds[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> workers;
      for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < spec.seeds.size(); i = next++) {
            try {
              result.outcomes[i] = run_seed(scenario, spec, spec.seeds[i]);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!first_error) first_error = std::current_exception();
            }
          }
        });
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  if (!spec.output_dir.empty()) write_outputs(result, scenario);
  return result;
}

}  // namespace dynaedit
