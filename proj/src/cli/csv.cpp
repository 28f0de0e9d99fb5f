#include "tsbandit/cli/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tsbandit/errors.hpp"

namespace tsb::cli {

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buffer.data(), ptr);
}

std::vector<OutputRecord> make_records(const Experiment& experiment, const RegretSummary& summary) {
  std::vector<OutputRecord> records;
  records.reserve(summary.checkpoints.size());
  for (const auto& c : summary.checkpoints) {
    records.push_back({experiment.id, to_string(experiment.config.policy.kind),
                       experiment.environment_descriptor, experiment.config.horizon, c.t, c.mean,
                       c.std_error, c.ci95, summary.episodes, experiment.config.master_seed});
  }
  return records;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_rows(std::ostream& out, const std::vector<OutputRecord>& records) {
  for (const auto& r : records) {
    out << r.experiment_id << ',' << r.policy << ',' << r.environment << ',' << r.n << ',' << r.t
        << ',' << format_double(r.mean_cum_regret) << ',' << format_double(r.std_error) << ','
        << format_double(r.ci95) << ',' << r.episodes << ',' << r.master_seed << '\n';
  }
}

namespace {

template <typename T>
T parse_number(std::string_view field, int line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": column '" + std::string(column) +
                      "' is not a number");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::vector<OutputRecord> parse_csv(std::string_view text) {
  std::vector<OutputRecord> records;
  int line_number = 0;
  bool saw_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!saw_header) {
      if (line != kCsvHeader) throw ConfigError("csv header does not match the regret schema");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) {
      throw ConfigError("csv line " + std::to_string(line_number) + ": expected 10 columns, got " +
                        std::to_string(f.size()));
    }
    OutputRecord r;
    r.experiment_id = std::string(f[0]);
    r.policy = std::string(f[1]);
    r.environment = std::string(f[2]);
    r.n = parse_number<std::int64_t>(f[3], line_number, "n");
    r.t = parse_number<std::int64_t>(f[4], line_number, "t");
    r.mean_cum_regret = parse_number<double>(f[5], line_number, "mean_cum_regret");
    r.std_error = parse_number<double>(f[6], line_number, "stderr");
    r.ci95 = parse_number<double>(f[7], line_number, "ci95");
    r.episodes = parse_number<std::int64_t>(f[8], line_number, "episodes");
    r.master_seed = parse_number<std::uint64_t>(f[9], line_number, "master_seed");
    records.push_back(std::move(r));
  }
  if (!saw_header) throw ConfigError("csv is empty (no header)");
  return records;
}

std::vector<OutputRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open csv file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace tsb::cli
