#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "dynaedit/editor/inversion_free.hpp"
#include "dynaedit/error.hpp"
#include "dynaedit/harness/ablation.hpp"
#include "dynaedit/harness/config.hpp"
#include "dynaedit/harness/io.hpp"
#include "dynaedit/harness/scenarios.hpp"
#include "dynaedit/harness/stats.hpp"
#include "dynaedit/harness/study.hpp"
#include "dynaedit/harness/svg.hpp"
#include "dynaedit/tensorcore/vector_ops.hpp"

namespace fs = std::filesystem;
using namespace dynaedit;

namespace {

// Calibration over source seeds 0-99: max 0.0335, mean 0.0151.
constexpr double kTrajectoryJitterCeiling = 0.04;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dynaedit_harness_test_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t count_files(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

void require_same_tree(const fs::path& a, const fs::path& b) {
  std::set<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    names.insert(rel.generic_string());
    REQUIRE(fs::exists(b / rel));
    const std::string left = read_text_file(e.path());
    const std::string right = read_text_file(b / rel);
    if (rel.filename() == "study.json") continue;  // records the output directory itself
    REQUIRE_MESSAGE(left == right, rel.generic_string());
  }
  std::size_t count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) count_b += e.is_regular_file();
  REQUIRE(count_b == names.size());
}

long double choose(unsigned n, unsigned k) {
  long double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("built-in scenarios") {
  const auto all = builtin_scenarios();
  std::set<std::string> names;
  for (const auto& s : all) {
    names.insert(s.name);
    CHECK(s.registry.contains(s.source_label));
    CHECK(s.registry.contains(s.target_label));
    const LatentField x = s.source_sample();
    CHECK(x.frames() == s.frames);
    CHECK(x.frame_dim() == s.frame_dim);
    CHECK(bitwise_equal(x, find_scenario(s.name).source_sample()));
    CHECK(bitwise_equal(s.source_sample(17), find_scenario(s.name).source_sample(17)));
    CHECK_FALSE(bitwise_equal(s.source_sample(17), s.source_sample(18)));
  }
  CHECK(names == std::set<std::string>{"mean-shift", "trajectory-jump", "two-object", "bimodal-target"});
  try {
    (void)find_scenario("nope");
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::config);
  }
}

TEST_CASE("mean-shift with zero offset leaves the source in place") {
  const Scenario s = make_mean_shift_scenario(0.0);
  const auto& a = s.registry.get(s.source_label).components();
  const auto& b = s.registry.get(s.target_label).components();
  CHECK(a.front().mean == b.front().mean);
  const LatentField x = s.source_sample();
  EditConfig cfg;
  const LatentField d = dyna_edit(x, s.registry, s.source_condition(x), s.target_condition(x), cfg).edited;
  const LatentField f = flow_edit(x, s.registry, s.source_condition(x), s.target_condition(x), cfg).edited;
  CHECK(norm(subtract(d, x)) < 1e-9);
  CHECK(norm(subtract(f, x)) < 1e-9);
}

TEST_CASE("trajectory-jump source paths stay under the calibrated jitter ceiling") {
  const Scenario s = find_scenario("trajectory-jump");
  for (std::uint64_t seed = 0; seed < 100; ++seed) REQUIRE(jitter_energy(s.source_sample(seed)) < kTrajectoryJitterCeiling);
  // The target law keeps the source's first frame.
  const LatentField x = s.source_sample();
  const auto law = s.target_law(x);
  for (const auto& c : law.components()) {
    for (std::size_t k = 0; k < s.frame_dim; ++k) CHECK(c.mean.at(0, k) == x.at(0, k));
  }
}

TEST_CASE("two-object block B has the same law under both conditions") {
  const Scenario s = find_scenario("two-object");
  REQUIRE(s.preserved_block.has_value());
  const auto [begin, end] = *s.preserved_block;
  const auto& a = s.registry.get(s.source_label).components();
  const auto& b = s.registry.get(s.target_label).components();
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].weight == b[k].weight);
    CHECK(slice_dims(a[k].mean, begin, end) == slice_dims(b[k].mean, begin, end));
    for (std::size_t f = 0; f < s.frames; ++f) {
      for (std::size_t j = begin; j < end; ++j) CHECK(a[k].var[f * s.frame_dim + j] == b[k].var[f * s.frame_dim + j]);
    }
  }
}

TEST_CASE("sign test tail matches exact binomial counts") {
  for (unsigned n : {1u, 5u, 20u, 64u}) {
    for (unsigned k = 0; k <= n; k += (n > 20 ? 7 : 1)) {
      long double tail = 0;
      for (unsigned i = k; i <= n; ++i) tail += choose(n, i);
      tail /= std::pow(2.0L, n);
      CHECK(binomial_upper_tail(n, k) == doctest::Approx(static_cast<double>(tail)).epsilon(1e-12));
    }
  }
  const std::vector<double> d = {1, 2, -1, 0, 3, 4, 5, 0.5};
  const SignTest t = sign_test(d);
  CHECK(t.positive == 6);
  CHECK(t.negative == 1);
  CHECK(t.ties == 1);
  CHECK(t.p_value == doctest::Approx(8.0 / 128.0));
  CHECK(sign_test(std::vector<double>{0.0, 0.0}).p_value == 1.0);
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("3") == std::vector<std::uint64_t>{3});
  CHECK(parse_seed_list("0-3") == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(parse_seed_list("1,4,9-11") == std::vector<std::uint64_t>{1, 4, 9, 10, 11});
  CHECK_THROWS_AS(parse_seed_list("a"), Error);
  CHECK_THROWS_AS(parse_seed_list("5-2"), Error);
  CHECK_THROWS_AS(parse_seed_list(""), Error);
}

TEST_CASE("study config parsing is strict") {
  const StudySpec s = parse_study_spec(R"({
    "scenario": "two-object", "method": "flowedit", "preset": "strong-free",
    "seeds": "0-4", "vary_source": true,
    "edit": {"steps": 30, "tau": "inf", "anc": {"kind": "iid"}, "slots": {"early_count": 4}}
  })");
  CHECK(s.scenario == "two-object");
  CHECK(s.method == Method::flowedit);
  CHECK(s.edit.cfg_src == 4.5);
  CHECK(s.edit.cfg_tar == 8.5);
  CHECK(std::isinf(s.edit.tau));
  CHECK(s.edit.steps == 30);
  CHECK(s.edit.n_max == 30);
  CHECK(s.edit.anc.kind == AncKind::iid);
  CHECK(s.edit.slots.early_count == 4);
  CHECK(s.seeds.size() == 5);
  CHECK(s.vary_source);

  auto category_of = [](const char* text) {
    try {
      (void)parse_study_spec(text);
    } catch (const Error& e) {
      return e.category();
    }
    return ErrorCategory::io;  // sentinel: no error
  };
  CHECK(category_of(R"({"scenario": "mean-shift", "sedes": [1]})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"taux": 1}})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"anc": {"kind": "iid", "x": 1}}})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"steps": "ten"}})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"steps": -3}})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "seeds": [1, 1]})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "seeds": []})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"tau": 0}})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": "mean-shift", "edit": {"bank_size": 2}})") == ErrorCategory::config_mismatch);
  CHECK(category_of(R"({"scenario": "nowhere"})") == ErrorCategory::config);
  CHECK(category_of(R"({"method": "sample"})") == ErrorCategory::config);
  CHECK(category_of(R"({"scenario": )") == ErrorCategory::config);
}

TEST_CASE("study config round-trips through JSON") {
  StudySpec s;
  s.scenario = "bimodal-target";
  s.method = Method::sdedit;
  s.seeds = {4, 2, 9};
  s.edit.tau = std::numeric_limits<double>::infinity();
  s.edit.anc.kind = AncKind::markov_decreasing;
  s.edit.similarity = SimilarityKind::neg_mse;
  s.edit.n_max = 40;
  s.sdedit_t_start = 0.3;
  s.output_dir = "out/x";
  const StudySpec r = parse_study_spec(study_spec_to_json(s));
  CHECK(r.scenario == s.scenario);
  CHECK(r.method == s.method);
  CHECK(r.seeds == s.seeds);
  CHECK(std::isinf(r.edit.tau));
  CHECK(r.edit.anc.kind == s.edit.anc.kind);
  CHECK(r.edit.similarity == s.edit.similarity);
  CHECK(r.edit.n_max == 40);
  CHECK(r.sdedit_t_start == 0.3);
  CHECK(r.output_dir == s.output_dir);
  CHECK(study_spec_to_json(r) == study_spec_to_json(s));
}

TEST_CASE("latent files") {
  RngStream s{1, 0, 0};
  const LatentField z = gaussian(s, 3, 5);
  const std::string bytes = encode_latent(z);
  REQUIRE(bytes.size() == 24 + 8 * 15);
  CHECK(bytes.substr(0, 4) == "DYNL");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
  CHECK(static_cast<unsigned char>(bytes[8]) == 3);  // T
  CHECK(static_cast<unsigned char>(bytes[16]) == 5);  // d
  CHECK(bitwise_equal(decode_latent(bytes), z));
  CHECK_THROWS_AS(decode_latent(bytes.substr(0, bytes.size() - 1)), Error);
  CHECK_THROWS_AS(decode_latent("XXXX" + bytes.substr(4)), Error);
  const fs::path dir = scratch_dir("latent");
  write_latent(dir / "z.lat", z);
  CHECK(bitwise_equal(read_latent(dir / "z.lat"), z));
  try {
    (void)read_latent(dir / "missing.lat");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::io);
    CHECK(std::string(e.what()).find("missing.lat") != std::string::npos);
  }
}

TEST_CASE("trace files round-trip") {
  const Scenario sc = find_scenario("trajectory-jump");
  const LatentField x = sc.source_sample();
  EditConfig cfg;
  cfg.steps = 8;
  cfg.n_max = 8;
  cfg.snapshot_stride = 3;
  const EditTrace trace = dyna_edit(x, sc.registry, sc.source_condition(x), sc.target_condition(x), cfg).trace;
  const TraceHeader h{"trajectory-jump", "dynaedit", 5};
  const std::string text = encode_trace(h, trace);
  CHECK(text.find("\"schema\":\"dynaedit.trace\"") != std::string::npos);
  const auto [h2, t2] = decode_trace(text);
  CHECK(h2 == h);
  REQUIRE(t2.steps.size() == trace.steps.size());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& a = trace.steps[i];
    const auto& b = t2.steps[i];
    CHECK(a.step == b.step);
    CHECK(a.t == b.t);
    CHECK(a.weights == b.weights);
    CHECK(a.similarities == b.similarities);
    CHECK(a.noise_cosine == b.noise_cosine);
    CHECK(a.velocity_cosine == b.velocity_cosine);
    CHECK(a.snapshot.has_value() == b.snapshot.has_value());
    if (a.snapshot) CHECK(bitwise_equal(*a.snapshot, *b.snapshot));
  }
  CHECK(encode_trace(h2, t2) == text);
  CHECK_THROWS_AS(decode_trace("{\"schema\":\"other\",\"version\":1}\n"), Error);
}

TEST_CASE("metrics CSV round-trips and checks its stamp") {
  std::vector<MetricRow> rows(2);
  rows[0] = {3, 0.1, 1.0 / 3.0, 2.5e-17, 0.25, std::nullopt, -0.5, 0.75};
  rows[1] = {7, 1e300, 0.0, 1.0, std::nullopt, 0.125, std::nullopt, std::nullopt};
  const std::string text = encode_metrics_csv(rows);
  CHECK(text.rfind(kMetricsCsvStamp, 0) == 0);
  CHECK(decode_metrics_csv(text) == rows);
  CHECK_THROWS_AS(decode_metrics_csv(text.substr(text.find('\n') + 1)), Error);
  std::string bad = text;
  bad.replace(bad.find("jitter"), 6, "jitterX");
  CHECK_THROWS_AS(decode_metrics_csv(bad), Error);
}

TEST_CASE("a one-seed sample study writes one row, one trace and one latent") {
  StudySpec s;
  s.scenario = "bimodal-target";
  s.method = Method::sample;
  s.seeds = {0};
  s.edit.steps = 20;
  s.edit.n_max = 20;
  s.output_dir = scratch_dir("one");
  const StudyResult r = run_study(s);
  CHECK(read_metrics_csv(s.output_dir / "metrics.csv").size() == 1);
  CHECK(count_files(s.output_dir / "traces") == 1);
  CHECK(count_files(s.output_dir / "latents") == 1);
  CHECK(fs::exists(s.output_dir / "plots" / "metrics.svg"));
  CHECK(bitwise_equal(read_latent(s.output_dir / "latents" / "seed-0.lat"), r.outcomes[0].endpoint));
  CHECK(parse_study_spec(read_text_file(s.output_dir / "study.json")).seeds == s.seeds);
}

TEST_CASE("studies are bit-reproducible and independent of seed order and threads") {
  StudySpec s;
  s.scenario = "trajectory-jump";
  s.method = Method::dynaedit;
  s.edit.steps = 15;
  s.edit.n_max = 15;
  s.seeds = parse_seed_list("0-19");
  s.output_dir = scratch_dir("det_a");
  (void)run_study(s, 1);
  StudySpec again = s;
  again.output_dir = scratch_dir("det_b");
  (void)run_study(again, 4);
  require_same_tree(s.output_dir, again.output_dir);

  StudySpec reversed = s;
  std::reverse(reversed.seeds.begin(), reversed.seeds.end());
  reversed.output_dir = scratch_dir("det_c");
  const StudyResult r = run_study(reversed, 3);
  for (std::uint64_t seed : {0u, 7u, 19u}) {
    const std::string f = "seed-" + std::to_string(seed);
    CHECK(read_text_file(s.output_dir / "latents" / (f + ".lat")) ==
          read_text_file(reversed.output_dir / "latents" / (f + ".lat")));
    CHECK(read_text_file(s.output_dir / "traces" / (f + ".jsonl")) ==
          read_text_file(reversed.output_dir / "traces" / (f + ".jsonl")));
  }
  CHECK(r.outcomes.front().seed == 19);
}

TEST_CASE("every method runs through the study driver") {
  for (Method m : {Method::dynaedit, Method::flowedit, Method::sdedit, Method::ode_inversion, Method::sample}) {
    StudySpec s;
    s.scenario = "two-object";
    s.method = m;
    s.edit.steps = 10;
    s.edit.n_max = 10;
    s.seeds = {1, 2};
    const StudyResult r = run_study(s, 1);
    REQUIRE(r.outcomes.size() == 2);
    for (const auto& o : r.outcomes) {
      CHECK(o.endpoint.all_finite());
      CHECK(o.row.preserved_lowfreq_alignment.has_value());
      const bool edits = m == Method::dynaedit || m == Method::flowedit;
      CHECK(o.row.velocity_dispersion.has_value() == edits);
      CHECK(o.trace.steps.empty() == !edits);
    }
  }
}

TEST_CASE("invalid specs fail before any output is written") {
  StudySpec s;
  s.scenario = "mean-shift";
  s.seeds = {1, 1};
  s.output_dir = scratch_dir("invalid");
  CHECK_THROWS_AS(run_study(s), Error);
  CHECK_FALSE(fs::exists(s.output_dir));
}

TEST_CASE("unwritable output directories report the path") {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  write_text_file(dir / "file", "x");
  StudySpec s;
  s.scenario = "mean-shift";
  s.seeds = {0};
  s.edit.steps = 5;
  s.edit.n_max = 5;
  s.output_dir = dir / "file" / "sub";
  try {
    (void)run_study(s);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::io);
    CHECK(std::string(e.what()).find("file") != std::string::npos);
  }
}

TEST_CASE("ablation suites") {
  AblationOptions o;
  o.seeds = 3;
  o.steps = 10;

  const AblationResult anc = ablation_suite("anc", o);
  REQUIRE(anc.arms.size() == 2);
  CHECK(anc.arms[0].name == "markov_increasing");
  CHECK(anc.arms[1].name == "iid");
  CHECK(anc.arms[0].count == anc.arms[1].count);
  CHECK(anc.comparison("jitter", "iid").a.size() == 3);

  const AblationResult sched = ablation_suite("schedules", o);
  std::set<std::string> arms;
  for (const auto& a : sched.arms) arms.insert(a.name);
  CHECK(arms == std::set<std::string>{"markov_increasing", "markov_decreasing", "non_markov_increasing", "iid"});

  const AblationResult nmax = ablation_suite("nmax", o);
  REQUIRE(nmax.studies.size() == 2);
  CHECK(nmax.studies[0].spec.edit.n_max == 9);
  CHECK(nmax.studies[1].spec.edit.n_max == 10);
  CHECK(nmax.arms[0].energy_distance.has_value());
  CHECK(nmax.studies[0].spec.seeds == nmax.studies[1].spec.seeds);

  const AblationResult sga = ablation_suite("sga", o);
  CHECK(sga.studies[0].spec.method == Method::dynaedit);
  CHECK(sga.studies[1].spec.method == Method::flowedit);
  CHECK(sga.studies[0].spec.edit.slots == sga.studies[1].spec.edit.slots);
  CHECK(sga.comparison("preserved_lowfreq_alignment", "flowedit").seeds.size() == 3);

  const AblationResult sim = ablation_suite("similarity", o);
  CHECK(sim.studies[1].spec.edit.similarity == SimilarityKind::neg_mse);

  try {
    (void)ablation_suite("bogus", o);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::config);
  }
}

TEST_CASE("ablation output files") {
  AblationOptions o;
  o.seeds = 2;
  o.steps = 8;
  o.output_dir = scratch_dir("ablate");
  (void)ablation_suite("anc", o);
  for (const char* f : {"arms.csv", "paired.csv", "summary.csv"}) CHECK(fs::exists(o.output_dir / f));
  CHECK(read_metrics_csv(o.output_dir / "iid" / "metrics.csv").size() == 2);
  const std::string summary = read_text_file(o.output_dir / "summary.csv");
  CHECK(summary.find("jitter,markov_increasing,iid,2,") != std::string::npos);
}

TEST_CASE("svg output") {
  const std::string line = line_plot_svg("t <1>", "step", {{"a", {0.0, 1.0, 0.5}}, {"b", {}}});
  CHECK(line.rfind("<svg", 0) == 0);
  CHECK(line.find("polyline") != std::string::npos);
  CHECK(line.find("t &lt;1&gt;") != std::string::npos);
  const std::string strip = strip_plot_svg("m", {{"x", {1.0, 1.0}}, {"y", {NAN, 2.0}}});
  CHECK(strip.find("circle") != std::string::npos);
  CHECK(strip.find("nan") == std::string::npos);
}
