#include "dynaedit/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "dynaedit/error.hpp"
#include "dynaedit/harness/io.hpp"
#include "dynaedit/harness/scenarios.hpp"

namespace dynaedit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCategory::config, message); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double read_real(const json& v, const std::string& key) {
  if (!v.is_number()) fail("'" + key + "' must be a number");
  return v.get<double>();
}

std::size_t read_count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) fail("'" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail("'" + key + "' must be a string");
  return v.get<std::string>();
}

// tau accepts "inf" for exactly uniform weights.
double read_tau(const json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  return read_real(v, "tau");
}

void read_edit(const json& e, EditConfig& c) {
  reject_unknown_keys(e,
                      {"steps", "n_max", "tau", "cfg_src", "cfg_tar", "similarity", "shift", "bank_size",
                       "snapshot_stride", "anc", "slots"},
                      "edit");
  bool n_max_given = false;
  for (const auto& [key, v] : e.items()) {
    if (key == "steps") c.steps = read_count(v, key);
    else if (key == "n_max") { c.n_max = read_count(v, key); n_max_given = true; }
    else if (key == "tau") c.tau = read_tau(v);
    else if (key == "cfg_src") c.cfg_src = read_real(v, key);
    else if (key == "cfg_tar") c.cfg_tar = read_real(v, key);
    else if (key == "similarity") c.similarity = parse_similarity(read_string(v, key));
    else if (key == "shift") c.shift = read_real(v, key);
    else if (key == "bank_size") c.bank_size = read_count(v, key);
    else if (key == "snapshot_stride") c.snapshot_stride = read_count(v, key);
    else if (key == "anc") {
      reject_unknown_keys(v, {"kind", "t_saturate"}, "edit.anc");
      if (v.contains("kind")) c.anc.kind = parse_anc_kind(read_string(v["kind"], "kind"));
      if (v.contains("t_saturate")) c.anc.t_saturate = read_real(v["t_saturate"], "t_saturate");
    } else if (key == "slots") {
      reject_unknown_keys(v, {"early_count", "early_steps", "late_count"}, "edit.slots");
      if (v.contains("early_count")) c.slots.early_count = read_count(v["early_count"], "early_count");
      if (v.contains("early_steps")) c.slots.early_steps = read_count(v["early_steps"], "early_steps");
      if (v.contains("late_count")) c.slots.late_count = read_count(v["late_count"], "late_count");
    }
  }
  // n_max follows steps unless set explicitly.
  if (!n_max_given) c.n_max = c.steps;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail("bad seed '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::dynaedit: return "dynaedit";
    case Method::flowedit: return "flowedit";
    case Method::sdedit: return "sdedit";
    case Method::ode_inversion: return "ode_inversion";
    case Method::sample: return "sample";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::dynaedit, Method::flowedit, Method::sdedit, Method::ode_inversion, Method::sample}) {
    if (to_string(m) == name) return m;
  }
  fail("unknown method '" + std::string(name) + "'");
}

void StudySpec::validate() const {
  if (seeds.empty()) fail("seed list is empty");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) fail("seed list has duplicates");
  (void)find_scenario(scenario);
  edit.validate();
  if (!(sdedit_t_start > 0.0 && sdedit_t_start <= 1.0)) fail("sdedit_t_start must lie in (0, 1]");
  if (!std::isfinite(sample_cfg) || sample_cfg < 0.0) fail("sample_cfg must be >= 0");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view part = text.substr(start, comma - start);
    const std::size_t dash = part.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse_u64(part));
    } else {
      const std::uint64_t lo = parse_u64(part.substr(0, dash));
      const std::uint64_t hi = parse_u64(part.substr(dash + 1));
      if (hi < lo) fail("descending seed range '" + std::string(part) + "'");
      if (hi - lo >= 1000000) fail("seed range too long");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    start = comma + 1;
  }
  return seeds;
}

StudySpec parse_study_spec(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(root,
                      {"scenario", "method", "preset", "seeds", "output_dir", "vary_source", "sample_cfg",
                       "sdedit_t_start", "edit"},
                      "study config");
  StudySpec spec;
  if (!root.contains("scenario")) fail("missing required key 'scenario'");
  spec.scenario = read_string(root["scenario"], "scenario");
  if (root.contains("method")) spec.method = parse_method(read_string(root["method"], "method"));
  if (root.contains("preset")) apply_preset(spec.edit, find_preset(read_string(root["preset"], "preset")));
  if (root.contains("edit")) {
    read_edit(root["edit"], spec.edit);
  }
  if (root.contains("seeds")) {
    const json& s = root["seeds"];
    if (s.is_string()) {
      spec.seeds = parse_seed_list(s.get<std::string>());
    } else if (s.is_array()) {
      for (const auto& v : s) spec.seeds.push_back(read_count(v, "seeds[]"));
    } else {
      fail("'seeds' must be an array or a range string");
    }
  } else {
    spec.seeds = {0};
  }
  if (root.contains("output_dir")) spec.output_dir = read_string(root["output_dir"], "output_dir");
  if (root.contains("vary_source")) {
    if (!root["vary_source"].is_boolean()) fail("'vary_source' must be a boolean");
    spec.vary_source = root["vary_source"].get<bool>();
  }
  if (root.contains("sample_cfg")) spec.sample_cfg = read_real(root["sample_cfg"], "sample_cfg");
  if (root.contains("sdedit_t_start")) spec.sdedit_t_start = read_real(root["sdedit_t_start"], "sdedit_t_start");
  spec.validate();
  return spec;
}

StudySpec load_study_spec(const std::filesystem::path& path) {
  return parse_study_spec(read_text_file(path));
}

std::string study_spec_to_json(const StudySpec& spec) {
  const EditConfig& c = spec.edit;
  json edit = {{"steps", c.steps},
               {"n_max", c.n_max},
               {"tau", std::isinf(c.tau) ? json("inf") : json(c.tau)},
               {"cfg_src", c.cfg_src},
               {"cfg_tar", c.cfg_tar},
               {"similarity", std::string(to_string(c.similarity))},
               {"shift", c.shift},
               {"bank_size", c.bank_size},
               {"snapshot_stride", c.snapshot_stride},
               {"anc", {{"kind", std::string(to_string(c.anc.kind))}, {"t_saturate", c.anc.t_saturate}}},
               {"slots",
                {{"early_count", c.slots.early_count},
                 {"early_steps", c.slots.early_steps},
                 {"late_count", c.slots.late_count}}}};
  json root = {{"scenario", spec.scenario},
               {"method", std::string(to_string(spec.method))},
               {"seeds", spec.seeds},
               {"output_dir", spec.output_dir.generic_string()},
               {"vary_source", spec.vary_source},
               {"sample_cfg", spec.sample_cfg},
               {"sdedit_t_start", spec.sdedit_t_start},
               {"edit", edit}};
  return root.dump(2) + "\n";
}

}  // namespace dynaedit
