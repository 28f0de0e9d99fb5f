#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tsbandit/cli/config.hpp"
#include "tsbandit/simulation.hpp"

namespace tsb::cli {

inline constexpr std::string_view kCsvHeader =
    "experiment_id,policy,environment,n,t,mean_cum_regret,stderr,ci95,episodes,master_seed";

struct OutputRecord {
  std::string experiment_id;
  std::string policy;
  std::string environment;
  std::int64_t n = 0;
  std::int64_t t = 0;
  double mean_cum_regret = 0.0;
  double std_error = 0.0;
  double ci95 = 0.0;
  std::int64_t episodes = 0;
  std::uint64_t master_seed = 0;
};

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::vector<OutputRecord> make_records(const Experiment& experiment, const RegretSummary& summary);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const std::vector<OutputRecord>& records);

// Throws ConfigError on a header or field mismatch.
std::vector<OutputRecord> parse_csv(std::string_view text);
std::vector<OutputRecord> read_csv_file(const std::string& path);

}  // namespace tsb::cli
