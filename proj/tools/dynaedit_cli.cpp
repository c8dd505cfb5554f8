#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynaedit/error.hpp"
#include "dynaedit/harness/ablation.hpp"
#include "dynaedit/harness/config.hpp"
#include "dynaedit/harness/io.hpp"
#include "dynaedit/harness/scenarios.hpp"
#include "dynaedit/harness/study.hpp"
#include "dynaedit/harness/svg.hpp"
#include "dynaedit/metrics/metrics.hpp"

using namespace dynaedit;

namespace {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 3;
    case ErrorCategory::config_mismatch: return 4;
    case ErrorCategory::unknown_condition: return 5;
    case ErrorCategory::degenerate_input:
    case ErrorCategory::degenerate_condition: return 6;
    case ErrorCategory::shape: return 7;
    case ErrorCategory::too_few_frames:
    case ErrorCategory::trace_too_short: return 8;
    case ErrorCategory::io: return 9;
  }
  return 1;
}

int report_error(const std::string& category, const std::string& message, int code) {
  nlohmann::json j = {{"error", category}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return code;
}

std::string opt_cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", *v);
  return buf;
}

void print_rows(const StudyResult& r) {
  std::printf("%-8s %-10s %-10s %-10s %-10s %-10s\n", "seed", "jitter", "lowfreq", "target", "preserved", "vel_disp");
  for (const auto& o : r.outcomes) {
    const auto& row = o.row;
    std::printf("%-8llu %-10.5f %-10.5f %-10.5f %-10s %-10s\n", static_cast<unsigned long long>(row.seed),
                row.jitter, row.lowfreq_alignment, row.target_distance,
                opt_cell(row.preserved_lowfreq_alignment).c_str(), opt_cell(row.velocity_dispersion).c_str());
  }
  if (!r.spec.output_dir.empty()) std::printf("wrote %s\n", r.spec.output_dir.string().c_str());
}

void print_trace(const EditTrace& trace) {
  std::printf("%-6s %-9s %-9s %-6s %-11s %-11s %-9s\n", "step", "t", "anc_a", "slots", "noise_cos", "vel_cos",
              "max_w");
  for (const auto& r : trace.steps) {
    double max_w = 0.0;
    for (double w : r.weights) max_w = std::max(max_w, w);
    std::printf("%-6zu %-9.4f %-9.4f %-6zu %-11s %-11s %-9.4f\n", r.step, r.t, r.anc_coefficient, r.active_slots,
                opt_cell(r.noise_cosine.empty() ? std::nullopt : std::optional<double>(r.noise_cosine.front()))
                    .c_str(),
                opt_cell(r.velocity_cosine).c_str(), max_w);
  }
}

double parse_tau(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorCategory::config, "bad --tau '" + text + "'");
  return v;
}

struct EditFlags {
  std::string scenario;
  std::string method = "dynaedit";
  std::string config_path;
  std::string preset;
  std::string seeds;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> n_max;
  std::optional<std::string> tau;
  std::optional<std::string> anc;
  std::optional<std::string> similarity;
  std::optional<double> cfg_src;
  std::optional<double> cfg_tar;
  std::optional<double> t_start;
  bool vary_source = false;
  std::string out;
  unsigned threads = 0;
};

StudySpec spec_from_flags(const EditFlags& f) {
  StudySpec spec;
  if (!f.config_path.empty()) spec = load_study_spec(f.config_path);
  if (!f.scenario.empty()) spec.scenario = f.scenario;
  if (spec.scenario.empty()) throw Error(ErrorCategory::config, "--scenario or a config file is required");
  if (!f.method.empty()) spec.method = parse_method(f.method);
  if (!f.preset.empty()) apply_preset(spec.edit, find_preset(f.preset));
  if (f.steps) {
    spec.edit.steps = *f.steps;
    spec.edit.n_max = *f.steps;
  }
  if (f.n_max) spec.edit.n_max = *f.n_max;
  if (f.tau) spec.edit.tau = parse_tau(*f.tau);
  if (f.anc) spec.edit.anc.kind = parse_anc_kind(*f.anc);
  if (f.similarity) spec.edit.similarity = parse_similarity(*f.similarity);
  if (f.cfg_src) spec.edit.cfg_src = *f.cfg_src;
  if (f.cfg_tar) spec.edit.cfg_tar = *f.cfg_tar;
  if (f.t_start) spec.sdedit_t_start = *f.t_start;
  if (f.vary_source) spec.vary_source = true;
  if (!f.seeds.empty()) spec.seeds = parse_seed_list(f.seeds);
  if (spec.seeds.empty()) spec.seeds = {0};
  if (!f.out.empty()) spec.output_dir = f.out;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inversion-free flow editing on analytic Gaussian-mixture flows"};
  app.require_subcommand(1);

  auto* scenarios_cmd = app.add_subcommand("scenarios", "List the built-in scenarios");
  bool scenarios_json = false;
  scenarios_cmd->add_flag("--json", scenarios_json, "Emit JSON");

  auto* sample_cmd = app.add_subcommand("sample", "Plain conditional sampling under the target condition");
  std::string sample_scenario;
  std::string sample_seeds = "0";
  std::size_t sample_steps = 50;
  double sample_cfg = 1.0;
  std::string sample_out;
  unsigned sample_threads = 0;
  sample_cmd->add_option("--scenario", sample_scenario, "Scenario name")->required();
  sample_cmd->add_option("--seeds", sample_seeds, "Seeds, e.g. 0-19 or 1,3,5");
  sample_cmd->add_option("--steps", sample_steps, "Euler steps");
  sample_cmd->add_option("--cfg", sample_cfg, "Guidance scale");
  sample_cmd->add_option("--out", sample_out, "Output directory");
  sample_cmd->add_option("--threads", sample_threads, "Worker threads (0: all cores)");

  auto* edit_cmd = app.add_subcommand("edit", "Edit x_src from the source to the target condition");
  EditFlags ef;
  ef.method.clear();
  edit_cmd->add_option("--scenario", ef.scenario, "Scenario name");
  edit_cmd->add_option("--method", ef.method, "dynaedit | flowedit | sdedit | ode_inversion | sample");
  edit_cmd->add_option("--config", ef.config_path, "JSON study config (flags override it)");
  edit_cmd->add_option("--preset", ef.preset, "mild-aligned | mild-free | strong-aligned | strong-free");
  edit_cmd->add_option("--seeds", ef.seeds, "Seeds, e.g. 0-19 or 1,3,5");
  edit_cmd->add_option("--steps", ef.steps, "Time steps N");
  edit_cmd->add_option("--n-max", ef.n_max, "Starting step index");
  edit_cmd->add_option("--tau", ef.tau, "Softmax temperature, or inf");
  edit_cmd->add_option("--anc", ef.anc, "iid | constant | markov_increasing | markov_decreasing | non_markov_increasing");
  edit_cmd->add_option("--similarity", ef.similarity, "cosine | neg_mse");
  edit_cmd->add_option("--cfg-src", ef.cfg_src, "Source guidance scale");
  edit_cmd->add_option("--cfg-tar", ef.cfg_tar, "Target guidance scale");
  edit_cmd->add_option("--t-start", ef.t_start, "SDEdit noise level");
  edit_cmd->add_flag("--vary-source", ef.vary_source, "Draw x_src from each seed");
  edit_cmd->add_option("--out", ef.out, "Output directory");
  edit_cmd->add_option("--threads", ef.threads, "Worker threads (0: all cores)");

  auto* ablate_cmd = app.add_subcommand("ablate", "Run a paired ablation study");
  std::string ablation;
  AblationOptions ao;
  std::string ablate_out;
  ablate_cmd->add_option("name", ablation, "sga | anc | schedules | similarity | nmax")->required();
  ablate_cmd->add_option("--seeds", ao.seeds, "Number of paired seeds");
  ablate_cmd->add_option("--first-seed", ao.first_seed, "First seed");
  ablate_cmd->add_option("--steps", ao.steps, "Time steps N");
  ablate_cmd->add_option("--preset", ao.preset, "Hyperparameter preset");
  ablate_cmd->add_option("--out", ablate_out, "Output directory");
  ablate_cmd->add_option("--threads", ao.threads, "Worker threads (0: all cores)");

  auto* trace_cmd = app.add_subcommand("trace", "Per-step correlation trace of one DynaEdit run, or of a saved trace");
  std::string trace_scenario = "trajectory-jump";
  std::uint64_t trace_seed = 0;
  std::string trace_anc = "markov_increasing";
  std::string trace_preset = "mild-aligned";
  std::size_t trace_steps = 50;
  std::string trace_input;
  std::string trace_out;
  std::string trace_svg;
  trace_cmd->add_option("--scenario", trace_scenario, "Scenario name");
  trace_cmd->add_option("--seed", trace_seed, "Edit seed");
  trace_cmd->add_option("--anc", trace_anc, "ANC schedule");
  trace_cmd->add_option("--preset", trace_preset, "Hyperparameter preset");
  trace_cmd->add_option("--steps", trace_steps, "Time steps N");
  trace_cmd->add_option("--input", trace_input, "Read a saved .jsonl trace instead of running");
  trace_cmd->add_option("--out", trace_out, "Write the trace as JSON lines");
  trace_cmd->add_option("--svg", trace_svg, "Write the correlation plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    if (*scenarios_cmd) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& s : builtin_scenarios()) {
        list.push_back({{"name", s.name},
                        {"frames", s.frames},
                        {"frame_dim", s.frame_dim},
                        {"source", s.source_label},
                        {"target", s.target_label},
                        {"first_frame_conditioning", s.condition_on_first_frame},
                        {"description", s.description}});
        if (!scenarios_json) {
          std::printf("%-16s T=%-3zu d=%-3zu %s -> %s  %s\n", s.name.c_str(), s.frames, s.frame_dim,
                      s.source_label.c_str(), s.target_label.c_str(), s.description.c_str());
        }
      }
      if (scenarios_json) std::printf("%s\n", list.dump(2).c_str());
    } else if (*sample_cmd) {
      StudySpec spec;
      spec.scenario = sample_scenario;
      spec.method = Method::sample;
      spec.edit.steps = sample_steps;
      spec.edit.n_max = sample_steps;
      spec.sample_cfg = sample_cfg;
      spec.seeds = parse_seed_list(sample_seeds);
      spec.output_dir = sample_out;
      print_rows(run_study(spec, sample_threads));
    } else if (*edit_cmd) {
      print_rows(run_study(spec_from_flags(ef), ef.threads));
    } else if (*ablate_cmd) {
      ao.output_dir = ablate_out;
      const AblationResult r = ablation_suite(ablation, ao);
      std::printf("suite %s on %s, %zu seeds\n", r.name.c_str(), r.scenario.c_str(), ao.seeds);
      std::printf("%-24s %-8s %-10s %-10s %-10s %-10s %-10s\n", "arm", "count", "jitter", "lowfreq", "preserved",
                  "vel_disp", "energy");
      for (const auto& a : r.arms) {
        std::printf("%-24s %-8zu %-10.5f %-10.5f %-10s %-10s %-10s\n", a.name.c_str(), a.count, a.jitter,
                    a.lowfreq_alignment, opt_cell(a.preserved_lowfreq_alignment).c_str(),
                    opt_cell(a.velocity_dispersion).c_str(), opt_cell(a.energy_distance).c_str());
      }
      std::printf("\n%-28s %-24s %-24s %-7s %-7s %-10s\n", "metric", "arm_a", "arm_b", "b>a", "b<a", "p(b>a)");
      for (const auto& c : r.comparisons) {
        std::printf("%-28s %-24s %-24s %-7zu %-7zu %-10.3g\n", c.metric.c_str(), c.arm_a.c_str(), c.arm_b.c_str(),
                    c.test.positive, c.test.negative, c.test.p_value);
      }
      if (!ablate_out.empty()) std::printf("wrote %s\n", ablate_out.c_str());
    } else if (*trace_cmd) {
      EditTrace trace;
      if (!trace_input.empty()) {
        trace = read_trace(trace_input).second;
      } else {
        StudySpec spec;
        spec.scenario = trace_scenario;
        apply_preset(spec.edit, find_preset(trace_preset));
        spec.edit.steps = trace_steps;
        spec.edit.n_max = trace_steps;
        spec.edit.anc.kind = parse_anc_kind(trace_anc);
        spec.seeds = {trace_seed};
        spec.validate();
        const SeedOutcome o = run_seed(find_scenario(trace_scenario), spec, trace_seed);
        trace = o.trace;
        if (!trace_out.empty()) write_trace(trace_out, TraceHeader{trace_scenario, "dynaedit", trace_seed}, trace);
      }
      print_trace(trace);
      if (!trace_svg.empty()) {
        const CorrelationTrace corr = correlation_trace(trace);
        write_text_file(trace_svg, line_plot_svg("consecutive-step cosine", "step",
                                                 {{"noise", corr.noise}, {"velocity", corr.velocity}}));
      }
    }
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.category())), e.what(), exit_code(e.category()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
