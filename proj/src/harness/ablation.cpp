#include "dynaedit/harness/ablation.hpp"

#include <array>

#include "dynaedit/error.hpp"
#include "dynaedit/tensorcore/rng.hpp"

namespace dynaedit {

namespace {

constexpr std::uint64_t kTargetSetTag = 0x54415247u;  // "TARG"

struct ArmPlan {
  std::string name;
  StudySpec spec;
};

struct SuitePlan {
  std::string scenario;
  std::vector<ArmPlan> arms;
  // (metric, arm_a, arm_b)
  std::vector<std::array<std::string, 3>> comparisons;
  bool energy_distance = false;
};

std::optional<double> metric_value(const MetricRow& row, const std::string& metric) {
  if (metric == "jitter") return row.jitter;
  if (metric == "lowfreq_alignment") return row.lowfreq_alignment;
  if (metric == "target_distance") return row.target_distance;
  if (metric == "preserved_lowfreq_alignment") return row.preserved_lowfreq_alignment;
  if (metric == "velocity_dispersion") return row.velocity_dispersion;
  throw Error(ErrorCategory::config, "unknown metric '" + metric + "'");
}

StudySpec base_spec(const std::string& scenario, const AblationOptions& options) {
  StudySpec spec;
  spec.scenario = scenario;
  spec.method = Method::dynaedit;
  apply_preset(spec.edit, find_preset(options.preset));
  spec.edit.steps = options.steps;
  spec.edit.n_max = options.steps;
  for (std::size_t i = 0; i < options.seeds; ++i) spec.seeds.push_back(options.first_seed + i);
  return spec;
}

SuitePlan plan_suite(std::string_view name, const AblationOptions& options) {
  SuitePlan plan;
  if (name == "sga" || name == "similarity") {
    plan.scenario = "two-object";
    StudySpec base = base_spec(plan.scenario, options);
    base.vary_source = true;
    if (name == "sga") {
      StudySpec dyna = base;
      dyna.edit.tau = 0.01;
      StudySpec flow = base;
      flow.method = Method::flowedit;
      plan.arms = {{"dynaedit", dyna}, {"flowedit", flow}};
      plan.comparisons = {{"preserved_lowfreq_alignment", "dynaedit", "flowedit"},
                          {"lowfreq_alignment", "dynaedit", "flowedit"}};
    } else {
      StudySpec cosine = base;
      cosine.edit.similarity = SimilarityKind::cosine;
      StudySpec mse = base;
      mse.edit.similarity = SimilarityKind::neg_mse;
      plan.arms = {{"cosine", cosine}, {"neg_mse", mse}};
      plan.comparisons = {{"preserved_lowfreq_alignment", "cosine", "neg_mse"},
                          {"lowfreq_alignment", "cosine", "neg_mse"}};
    }
  } else if (name == "anc" || name == "schedules") {
    plan.scenario = "trajectory-jump";
    const StudySpec base = base_spec(plan.scenario, options);
    std::vector<AncKind> kinds = {AncKind::markov_increasing, AncKind::iid};
    if (name == "schedules") {
      kinds = {AncKind::markov_increasing, AncKind::markov_decreasing, AncKind::non_markov_increasing, AncKind::iid};
    }
    for (AncKind k : kinds) {
      StudySpec s = base;
      s.edit.anc.kind = k;
      plan.arms.push_back({std::string(to_string(k)), s});
    }
    for (std::size_t i = 1; i < plan.arms.size(); ++i) {
      plan.comparisons.push_back({"jitter", plan.arms[0].name, plan.arms[i].name});
      plan.comparisons.push_back({"velocity_dispersion", plan.arms[0].name, plan.arms[i].name});
    }
  } else if (name == "nmax") {
    if (options.steps < 2) throw Error(ErrorCategory::config, "nmax suite needs at least two steps");
    plan.scenario = "trajectory-jump";
    const StudySpec base = base_spec(plan.scenario, options);
    StudySpec shorter = base;
    shorter.edit.n_max = options.steps - 1;
    const std::string a = "n_max-" + std::to_string(options.steps - 1);
    const std::string b = "n_max-" + std::to_string(options.steps);
    plan.arms = {{a, shorter}, {b, base}};
    plan.comparisons = {{"lowfreq_alignment", a, b}, {"jitter", a, b}, {"target_distance", a, b}};
    plan.energy_distance = true;
  } else {
    throw Error(ErrorCategory::config, "unknown ablation '" + std::string(name) + "'");
  }
  return plan;
}

std::optional<double> mean_of(const StudyResult& study, const std::string& metric) {
  std::vector<double> values;
  for (const auto& o : study.outcomes) {
    if (auto v = metric_value(o.row, metric)) values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  return mean(values);
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_suite_files(const AblationResult& r, const std::filesystem::path& dir) {
  std::string arms = "# dynaedit.ablation-arms v1\n"
                     "suite,arm,count,jitter,lowfreq_alignment,target_distance,preserved_lowfreq_alignment,"
                     "velocity_dispersion,energy_distance\n";
  for (const auto& a : r.arms) {
    arms += r.name + ',' + a.name + ',' + std::to_string(a.count) + ',' + format_double(a.jitter) + ',' +
            format_double(a.lowfreq_alignment) + ',' + format_double(a.target_distance) + ',' +
            cell(a.preserved_lowfreq_alignment) + ',' + cell(a.velocity_dispersion) + ',' + cell(a.energy_distance) +
            '\n';
  }
  std::string paired = "# dynaedit.ablation-paired v1\nmetric,arm_a,arm_b,seed,value_a,value_b,difference\n";
  std::string summary =
      "# dynaedit.ablation-summary v1\nmetric,arm_a,arm_b,pairs,b_greater,b_less,ties,mean_a,mean_b,p_b_greater\n";
  for (const auto& c : r.comparisons) {
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
      paired += c.metric + ',' + c.arm_a + ',' + c.arm_b + ',' + std::to_string(c.seeds[i]) + ',' +
                format_double(c.a[i]) + ',' + format_double(c.b[i]) + ',' + format_double(c.b[i] - c.a[i]) + '\n';
    }
    summary += c.metric + ',' + c.arm_a + ',' + c.arm_b + ',' + std::to_string(c.seeds.size()) + ',' +
               std::to_string(c.test.positive) + ',' + std::to_string(c.test.negative) + ',' +
               std::to_string(c.test.ties) + ',' + format_double(mean(c.a)) + ',' + format_double(mean(c.b)) + ',' +
               format_double(c.test.p_value) + '\n';
  }
  write_text_file(dir / "arms.csv", arms);
  write_text_file(dir / "paired.csv", paired);
  write_text_file(dir / "summary.csv", summary);
}

}  // namespace

const std::vector<std::string>& ablation_names() {
  static const std::vector<std::string> names = {"sga", "anc", "schedules", "similarity", "nmax"};
  return names;
}

const ArmSummary& AblationResult::arm(std::string_view arm_name) const {
  for (const auto& a : arms) {
    if (a.name == arm_name) return a;
  }
  throw Error(ErrorCategory::config, "no arm '" + std::string(arm_name) + "' in suite " + name);
}

const PairedComparison& AblationResult::comparison(std::string_view metric, std::string_view arm_b) const {
  for (const auto& c : comparisons) {
    if (c.metric == metric && c.arm_b == arm_b) return c;
  }
  throw Error(ErrorCategory::config, "no comparison " + std::string(metric) + " vs " + std::string(arm_b));
}

AblationResult ablation_suite(std::string_view name, const AblationOptions& options) {
  if (options.seeds == 0) throw Error(ErrorCategory::config, "ablation needs at least one seed");
  SuitePlan plan = plan_suite(name, options);
  for (auto& arm : plan.arms) {
    if (!options.output_dir.empty()) arm.spec.output_dir = options.output_dir / arm.name;
    arm.spec.validate();
  }

  AblationResult result;
  result.name = std::string(name);
  result.scenario = plan.scenario;
  const Scenario scenario = find_scenario(plan.scenario);

  std::vector<LatentField> target_set;
  if (plan.energy_distance) {
    const LatentField x_src = scenario.source_sample();
    const ConditionedMixture law = scenario.target_law(x_src);
    RngStream stream{0, derive_stream_id({kTargetSetTag}), 0};
    for (std::size_t i = 0; i < kTargetSetSize; ++i) target_set.push_back(draw(law, stream));
  }

  for (const auto& arm : plan.arms) {
    StudyResult study = run_study(arm.spec, options.threads);
    ArmSummary s;
    s.name = arm.name;
    s.count = study.outcomes.size();
    s.jitter = *mean_of(study, "jitter");
    s.lowfreq_alignment = *mean_of(study, "lowfreq_alignment");
    s.target_distance = *mean_of(study, "target_distance");
    s.preserved_lowfreq_alignment = mean_of(study, "preserved_lowfreq_alignment");
    s.velocity_dispersion = mean_of(study, "velocity_dispersion");
    if (plan.energy_distance) {
      std::vector<LatentField> endpoints;
      for (const auto& o : study.outcomes) endpoints.push_back(o.endpoint);
      s.energy_distance = energy_distance(endpoints, target_set);
    }
    result.arms.push_back(std::move(s));
    result.studies.push_back(std::move(study));
  }

  auto study_of = [&](const std::string& arm_name) -> const StudyResult& {
    for (std::size_t i = 0; i < result.arms.size(); ++i) {
      if (result.arms[i].name == arm_name) return result.studies[i];
    }
    throw Error(ErrorCategory::config, "no arm '" + arm_name + "'");
  };
  for (const auto& [metric, arm_a, arm_b] : plan.comparisons) {
    const StudyResult& sa = study_of(arm_a);
    const StudyResult& sb = study_of(arm_b);
    PairedComparison c{metric, arm_a, arm_b, {}, {}, {}, {}};
    std::vector<double> diffs;
    for (std::size_t i = 0; i < sa.outcomes.size(); ++i) {
      const auto va = metric_value(sa.outcomes[i].row, metric);
      const auto vb = metric_value(sb.outcomes[i].row, metric);
      if (!va || !vb) continue;
      c.seeds.push_back(sa.outcomes[i].seed);
      c.a.push_back(*va);
      c.b.push_back(*vb);
      diffs.push_back(*vb - *va);
    }
    c.test = sign_test(diffs);
    result.comparisons.push_back(std::move(c));
  }

  if (!options.output_dir.empty()) write_suite_files(result, options.output_dir);
  return result;
}

}  // namespace dynaedit
