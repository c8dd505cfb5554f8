#include "dynaedit/harness/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dynaedit/error.hpp"

namespace dynaedit {

namespace {

using nlohmann::json;

constexpr char kLatentMagic[4] = {'D', 'Y', 'N', 'L'};
constexpr std::size_t kLatentHeaderBytes = 4 + 4 + 8 + 8;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

json number_array(const std::vector<double>& values) {
  json a = json::array();
  for (double v : values) a.push_back(v);
  return a;
}

std::vector<double> read_numbers(const json& a) {
  std::vector<double> out;
  for (const auto& v : a) out.push_back(v.get<double>());
  return out;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_double(const std::string& cell, const char* column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCategory::io, std::string("bad number '") + cell + "' in column " + column);
  }
  return v;
}

std::optional<double> parse_optional(const std::string& cell, const char* column) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell, column);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCategory::io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

std::string encode_latent(const LatentField& z) {
  std::string out(kLatentMagic, 4);
  put_u32(out, kLatentVersion);
  put_u64(out, z.frames());
  put_u64(out, z.frame_dim());
  for (double v : z.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

LatentField decode_latent(const std::string& bytes) {
  if (bytes.size() < kLatentHeaderBytes || std::memcmp(bytes.data(), kLatentMagic, 4) != 0) {
    throw Error(ErrorCategory::io, "not a latent file");
  }
  if (get_u32(bytes, 4) != kLatentVersion) throw Error(ErrorCategory::io, "unsupported latent version");
  const std::uint64_t frames = get_u64(bytes, 8);
  const std::uint64_t dim = get_u64(bytes, 16);
  const std::size_t payload = bytes.size() - kLatentHeaderBytes;
  if (frames == 0 || dim == 0 || payload % 8 != 0 || (payload / 8) % dim != 0 || payload / 8 / dim != frames) {
    throw Error(ErrorCategory::io, "latent payload size does not match its header");
  }
  std::vector<double> data(frames * dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<double>(get_u64(bytes, kLatentHeaderBytes + 8 * i));
  }
  return LatentField(frames, dim, std::move(data));
}

void write_latent(const std::filesystem::path& path, const LatentField& z) {
  write_text_file(path, encode_latent(z));
}

LatentField read_latent(const std::filesystem::path& path) {
  try {
    return decode_latent(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

std::string encode_trace(const TraceHeader& header, const EditTrace& trace) {
  std::string out;
  json head = {{"schema", kTraceSchema},
               {"version", kTraceVersion},
               {"scenario", header.scenario},
               {"method", header.method},
               {"seed", header.seed}};
  out += head.dump();
  out += '\n';
  for (const auto& r : trace.steps) {
    json rec = {{"step", r.step},
                {"t", r.t},
                {"anc_coefficient", r.anc_coefficient},
                {"active_slots", r.active_slots},
                {"similarities", number_array(r.similarities)},
                {"weights", number_array(r.weights)},
                {"velocity_norm", r.velocity_norm},
                {"noise_cosine", number_array(r.noise_cosine)},
                {"velocity_cosine", r.velocity_cosine ? json(*r.velocity_cosine) : json(nullptr)}};
    if (r.snapshot) {
      rec["snapshot"] = {{"frames", r.snapshot->frames()},
                         {"frame_dim", r.snapshot->frame_dim()},
                         {"values", number_array(r.snapshot->storage())}};
    }
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::pair<TraceHeader, EditTrace> decode_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::io, "empty trace file");
  TraceHeader header;
  EditTrace trace;
  try {
    const json head = json::parse(line);
    if (head.at("schema").get<std::string>() != kTraceSchema || head.at("version").get<int>() != kTraceVersion) {
      throw Error(ErrorCategory::io, "unsupported trace schema");
    }
    header.scenario = head.at("scenario").get<std::string>();
    header.method = head.at("method").get<std::string>();
    header.seed = head.at("seed").get<std::uint64_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json rec = json::parse(line);
      EditStepRecord r;
      r.step = rec.at("step").get<std::size_t>();
      r.t = rec.at("t").get<double>();
      r.anc_coefficient = rec.at("anc_coefficient").get<double>();
      r.active_slots = rec.at("active_slots").get<std::size_t>();
      r.similarities = read_numbers(rec.at("similarities"));
      r.weights = read_numbers(rec.at("weights"));
      r.velocity_norm = rec.at("velocity_norm").get<double>();
      r.noise_cosine = read_numbers(rec.at("noise_cosine"));
      if (!rec.at("velocity_cosine").is_null()) r.velocity_cosine = rec.at("velocity_cosine").get<double>();
      if (rec.contains("snapshot")) {
        const auto& s = rec.at("snapshot");
        r.snapshot = LatentField(s.at("frames").get<std::size_t>(), s.at("frame_dim").get<std::size_t>(),
                                 read_numbers(s.at("values")));
      }
      trace.steps.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::io, std::string("malformed trace: ") + e.what());
  }
  return {header, trace};
}

void write_trace(const std::filesystem::path& path, const TraceHeader& header, const EditTrace& trace) {
  write_text_file(path, encode_trace(header, trace));
}

std::pair<TraceHeader, EditTrace> read_trace(const std::filesystem::path& path) {
  try {
    return decode_trace(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

const std::vector<std::string>& metrics_csv_columns() {
  static const std::vector<std::string> columns = {
      "seed",           "jitter", "lowfreq_alignment", "target_distance", "preserved_lowfreq_alignment",
      "velocity_dispersion", "mean_noise_corr", "mean_velocity_corr"};
  return columns;
}

std::string encode_metrics_csv(const std::vector<MetricRow>& rows) {
  std::string out = kMetricsCsvStamp;
  out += '\n';
  const auto& cols = metrics_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + ',' + format_double(r.jitter) + ',' + format_double(r.lowfreq_alignment) + ',' +
           format_double(r.target_distance) + ',' + optional_cell(r.preserved_lowfreq_alignment) + ',' +
           optional_cell(r.velocity_dispersion) + ',' + optional_cell(r.mean_noise_corr) + ',' +
           optional_cell(r.mean_velocity_corr) + '\n';
  }
  return out;
}

std::vector<MetricRow> decode_metrics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsCsvStamp) {
    throw Error(ErrorCategory::io, "metrics CSV is missing its version stamp");
  }
  if (!std::getline(in, line) || split_csv_line(line) != metrics_csv_columns()) {
    throw Error(ErrorCategory::io, "metrics CSV header does not match the schema");
  }
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != metrics_csv_columns().size()) throw Error(ErrorCategory::io, "metrics CSV row has wrong width");
    MetricRow r;
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(c[0].data(), c[0].data() + c[0].size(), seed);
    if (ec != std::errc() || ptr != c[0].data() + c[0].size()) throw Error(ErrorCategory::io, "bad seed '" + c[0] + "'");
    r.seed = seed;
    r.jitter = parse_double(c[1], "jitter");
    r.lowfreq_alignment = parse_double(c[2], "lowfreq_alignment");
    r.target_distance = parse_double(c[3], "target_distance");
    r.preserved_lowfreq_alignment = parse_optional(c[4], "preserved_lowfreq_alignment");
    r.velocity_dispersion = parse_optional(c[5], "velocity_dispersion");
    r.mean_noise_corr = parse_optional(c[6], "mean_noise_corr");
    r.mean_velocity_corr = parse_optional(c[7], "mean_velocity_corr");
    rows.push_back(r);
  }
  return rows;
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
  write_text_file(path, encode_metrics_csv(rows));
}

std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path) {
  try {
    return decode_metrics_csv(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

}  // namespace dynaedit
