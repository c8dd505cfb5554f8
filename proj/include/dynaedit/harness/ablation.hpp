#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynaedit/harness/stats.hpp"
#include "dynaedit/harness/study.hpp"

namespace dynaedit {

struct AblationOptions {
  std::size_t seeds = 20;
  std::uint64_t first_seed = 0;
  std::size_t steps = 50;
  std::string preset = "mild-aligned";
  std::filesystem::path output_dir;  // empty: compute only
  unsigned threads = 0;
};

struct ArmSummary {
  std::string name;
  std::size_t count = 0;
  double jitter = 0.0;
  double lowfreq_alignment = 0.0;
  double target_distance = 0.0;
  std::optional<double> preserved_lowfreq_alignment;
  std::optional<double> velocity_dispersion;
  // Energy distance from the arm's endpoints to exact draws of the target law
  // (nmax suite only).
  std::optional<double> energy_distance;
};

// Per-seed paired values of one metric; the sign test asks whether arm_b
// tends to exceed arm_a.
struct PairedComparison {
  std::string metric;
  std::string arm_a;
  std::string arm_b;
  std::vector<std::uint64_t> seeds;
  std::vector<double> a;
  std::vector<double> b;
  SignTest test;
};

struct AblationResult {
  std::string name;
  std::string scenario;
  std::vector<ArmSummary> arms;
  std::vector<PairedComparison> comparisons;
  std::vector<StudyResult> studies;  // one per arm, same order as `arms`

  const ArmSummary& arm(std::string_view name) const;
  const PairedComparison& comparison(std::string_view metric, std::string_view arm_b) const;
};

// sga, anc, schedules, similarity, nmax
const std::vector<std::string>& ablation_names();

// Runs the paired study for one ablation. With an output directory, each arm
// writes its run_study files under <dir>/<arm>/ and the suite adds
// arms.csv, paired.csv and summary.csv. Throws Error{config} for an unknown
// name.
AblationResult ablation_suite(std::string_view name, const AblationOptions& options);

// Number of target-law draws used for the nmax energy distance.
inline constexpr std::size_t kTargetSetSize = 200;

}  // namespace dynaedit
