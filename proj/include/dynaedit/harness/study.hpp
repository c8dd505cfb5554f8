#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynaedit/editor/edit_trace.hpp"
#include "dynaedit/harness/config.hpp"
#include "dynaedit/harness/io.hpp"
#include "dynaedit/harness/scenarios.hpp"
#include "dynaedit/metrics/metrics.hpp"

namespace dynaedit {

struct SeedOutcome {
  std::uint64_t seed = 0;
  LatentField x_src;
  LatentField endpoint;
  EditTrace trace;
  MetricReport report;
  MetricRow row;
};

struct StudyResult {
  StudySpec spec;
  std::vector<SeedOutcome> outcomes;  // in spec.seeds order
};

// One seed of a study, independent of every other seed.
SeedOutcome run_seed(const Scenario& scenario, const StudySpec& spec, std::uint64_t seed);

// Runs every seed (concurrently when threads != 1; 0 picks the hardware
// concurrency) and, when spec.output_dir is set, writes
//   study.json, metrics.csv, traces/seed-<k>.jsonl, latents/seed-<k>.lat,
//   plots/correlation.svg, plots/metrics.svg
// Validation happens before any compute.
StudyResult run_study(const StudySpec& spec, unsigned threads = 0);

}  // namespace dynaedit
