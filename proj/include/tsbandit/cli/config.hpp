#pragma once

#include <map>
#include <string>
#include <string_view>

#include "tsbandit/simulation.hpp"

namespace tsb::cli {

// Flat `key = value` text, one experiment per file. `#` starts a comment.
//
//   experiment_id = fig1_delta0.2
//   policy        = bpr2          # ts_beta ts_finite bpr2 bprk moss ucb oracle
//   environment   = two_point     # fixed product_beta two_point bpr_uniform_gap finite
//   mu_star       = 0
//   delta         = 0.2
//   horizon       = 100000
//   episodes      = 200
//   seed          = 7
//   checkpoints   = 1000, 10000, 100000    # optional
//
// Environment-specific keys: `family`, `means` (fixed); `arms`, `alpha`,
// `beta` (product_beta); `mu_star`, `delta` (two_point); `mu_star`,
// `epsilon`, `arms`, `gap_max` (bpr_uniform_gap); `family`, `atoms`
// (semicolon-separated mean lists), `probabilities` (finite). Known-mean
// policies read `mu_star` with `delta` (bpr2) or `epsilon` (bprk).

struct ConfigEntry {
  std::string value;
  int line = 0;
};

using ConfigEntries = std::map<std::string, ConfigEntry, std::less<>>;

struct Experiment {
  std::string id;
  std::string environment_descriptor;
  ExperimentConfig config;
};

// Throws ConfigError with a "line N" or "field 'x'" diagnostic.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries read_config_file(const std::string& path);
Experiment build_experiment(const ConfigEntries& entries);

}  // namespace tsb::cli
