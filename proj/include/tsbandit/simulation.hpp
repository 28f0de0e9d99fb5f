#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tsbandit/environments.hpp"
#include "tsbandit/model.hpp"
#include "tsbandit/policies.hpp"

namespace tsb {

// Fixed theta (frequentist, estimates R_n(theta)) or a prior (Bayesian,
// estimates BR_n with theta redrawn per episode).
using Environment = std::variant<PriorSpec, BanditInstance>;

struct ExperimentConfig {
  PolicySpec policy;
  Environment environment;
  std::int64_t horizon = 0;
  std::int64_t episodes = 1;
  std::uint64_t master_seed = 0;
  // Sorted, strictly increasing, within [1, horizon]. Empty means the
  // default geometric grid.
  std::vector<std::int64_t> checkpoints;
};

// Throws ConfigError describing the first broken invariant.
void validate(const ExperimentConfig& config);
std::size_t num_arms(const Environment& environment);

// {ceil(n / 2^j) : j >= 0}, ascending, deduplicated.
std::vector<std::int64_t> default_checkpoints(std::int64_t horizon);
std::vector<std::int64_t> effective_checkpoints(const ExperimentConfig& config);

struct CheckpointSummary {
  std::int64_t t = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci95 = 0.0;
};

struct RegretSummary {
  std::vector<CheckpointSummary> checkpoints;
  std::int64_t episodes = 0;
};

// Cumulative regret at every checkpoint, one row per episode in stream order.
struct EpisodeMatrix {
  std::vector<std::int64_t> checkpoints;
  std::vector<std::vector<double>> rows;
};

class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(std::uint64_t stream_id, const std::string& what)
      : std::runtime_error("episode " + std::to_string(stream_id) + ": " + what),
        stream_id_(stream_id) {}
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t stream_id_;
};

// Plays `horizon` rounds of `policy` on `instance`. Per round the RNG is
// consumed by the policy's selection first, then by the reward draw.
RegretTrace run_episode(Policy& policy, const BanditInstance& instance, std::int64_t horizon,
                        RngStream& rng);
// Builds the policy for `instance` first; constant/instance mismatches raise
// ConfigError before any round is played.
RegretTrace run_episode(const PolicySpec& spec, const BanditInstance& instance,
                        std::int64_t horizon, RngStream& rng);

// Runs episodes 0..m-1 on streams (master_seed, episode). `workers` = 0 uses
// the hardware concurrency. Results do not depend on `workers`.
EpisodeMatrix run_episodes(const ExperimentConfig& config, unsigned workers = 0);
RegretSummary summarize(const EpisodeMatrix& matrix);
RegretSummary estimate_regret(const ExperimentConfig& config, unsigned workers = 0);

}  // namespace tsb
