#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dynaedit/editor/edit_trace.hpp"
#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

// Latent files: 4-byte magic "DYNL", uint32 version, uint64 T, uint64 d, then
// T*d float64 values. Every field is little-endian.
inline constexpr std::uint32_t kLatentVersion = 1;

std::string encode_latent(const LatentField& z);
LatentField decode_latent(const std::string& bytes);
void write_latent(const std::filesystem::path& path, const LatentField& z);
LatentField read_latent(const std::filesystem::path& path);

// Trace files hold one JSON object per line. The first line is a header
// {"schema": kTraceSchema, "version": kTraceVersion, "scenario", "method",
// "seed"}; every following line is one step record.
inline constexpr const char* kTraceSchema = "dynaedit.trace";
inline constexpr int kTraceVersion = 1;

struct TraceHeader {
  std::string scenario;
  std::string method;
  std::uint64_t seed = 0;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

std::string encode_trace(const TraceHeader& header, const EditTrace& trace);
std::pair<TraceHeader, EditTrace> decode_trace(const std::string& text);
void write_trace(const std::filesystem::path& path, const TraceHeader& header, const EditTrace& trace);
std::pair<TraceHeader, EditTrace> read_trace(const std::filesystem::path& path);

// One row of the per-seed metrics CSV. Optional cells are written empty.
struct MetricRow {
  std::uint64_t seed = 0;
  double jitter = 0.0;
  double lowfreq_alignment = 0.0;
  double target_distance = 0.0;
  std::optional<double> preserved_lowfreq_alignment;
  std::optional<double> velocity_dispersion;
  std::optional<double> mean_noise_corr;
  std::optional<double> mean_velocity_corr;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

// First line of every metrics CSV.
inline constexpr const char* kMetricsCsvStamp = "# dynaedit.metrics v1";
const std::vector<std::string>& metrics_csv_columns();

std::string encode_metrics_csv(const std::vector<MetricRow>& rows);
std::vector<MetricRow> decode_metrics_csv(const std::string& text);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace dynaedit
