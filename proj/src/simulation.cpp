#include "tsbandit/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "tsbandit/errors.hpp"

namespace tsb {

std::size_t num_arms(const Environment& environment) {
  if (const auto* instance = std::get_if<BanditInstance>(&environment)) return instance->num_arms();
  return num_arms(std::get<PriorSpec>(environment));
}

std::vector<std::int64_t> default_checkpoints(std::int64_t horizon) {
  std::vector<std::int64_t> grid;
  for (std::int64_t denom = 1;; denom *= 2) {
    const std::int64_t t = (horizon + denom - 1) / denom;
    grid.push_back(t);
    if (t <= 1) break;
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<std::int64_t> effective_checkpoints(const ExperimentConfig& config) {
  return config.checkpoints.empty() ? default_checkpoints(config.horizon) : config.checkpoints;
}

void validate(const ExperimentConfig& config) {
  if (const auto* prior = std::get_if<PriorSpec>(&config.environment)) validate(*prior);
  const auto k = static_cast<std::int64_t>(num_arms(config.environment));
  if (config.horizon < k) throw ConfigError("horizon must be at least the number of arms");
  if (config.episodes < 1) throw ConfigError("episodes must be at least 1");
  std::int64_t previous = 0;
  for (std::int64_t t : config.checkpoints) {
    if (t <= previous || t > config.horizon) {
      throw ConfigError("checkpoints must be strictly increasing within [1, horizon]");
    }
    previous = t;
  }
}

namespace {

// Core loop shared by full traces and checkpoint-only runs.
template <typename OnRound>
void play(Policy& policy, const BanditInstance& instance, std::int64_t horizon, RngStream& rng,
          OnRound&& on_round) {
  if (policy.num_arms() != instance.num_arms()) {
    throw ConfigError("policy and instance disagree on the number of arms");
  }
  const auto profile = gap_profile(instance);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::size_t arm = policy.select_arm(rng);
    const double reward = sample_reward(instance, arm, rng);
    policy.observe(arm, reward);
    on_round(t, arm, profile.gaps[arm]);
  }
}

BanditInstance draw_instance(const Environment& environment, RngStream& rng) {
  if (const auto* instance = std::get_if<BanditInstance>(&environment)) return *instance;
  return sample_instance(std::get<PriorSpec>(environment), rng);
}

std::vector<double> run_to_checkpoints(const ExperimentConfig& config,
                                       std::span<const std::int64_t> checkpoints,
                                       std::uint64_t stream_id) {
  RngStream rng(config.master_seed, stream_id);
  const BanditInstance instance = draw_instance(config.environment, rng);
  auto policy = make_policy(config.policy, instance, config.horizon);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  double cumulative = 0.0;
  play(*policy, instance, config.horizon, rng,
       [&](std::int64_t t, std::size_t, double gap) {
         cumulative += gap;
         while (next < checkpoints.size() && checkpoints[next] == t) {
           out.push_back(cumulative);
           ++next;
         }
       });
  return out;
}

}  // namespace

RegretTrace run_episode(Policy& policy, const BanditInstance& instance, std::int64_t horizon,
                        RngStream& rng) {
  RegretTrace trace;
  trace.episode_seed = rng.seed();
  trace.stream_id = rng.stream_id();
  trace.horizon = horizon;
  trace.theta_summary = gap_profile(instance);
  trace.arms.reserve(static_cast<std::size_t>(horizon));
  trace.instant_regret.reserve(static_cast<std::size_t>(horizon));
  play(policy, instance, horizon, rng, [&](std::int64_t, std::size_t arm, double gap) {
    trace.arms.push_back(arm);
    trace.instant_regret.push_back(gap);
  });
  trace.cumulative_regret = cumulative_sum(trace.instant_regret);
  return trace;
}

RegretTrace run_episode(const PolicySpec& spec, const BanditInstance& instance,
                        std::int64_t horizon, RngStream& rng) {
  auto policy = make_policy(spec, instance, horizon);
  return run_episode(*policy, instance, horizon, rng);
}

EpisodeMatrix run_episodes(const ExperimentConfig& config, unsigned workers) {
  validate(config);
  EpisodeMatrix matrix;
  matrix.checkpoints = effective_checkpoints(config);
  const auto m = static_cast<std::size_t>(config.episodes);
  matrix.rows.resize(m);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, m));

  std::atomic<std::size_t> next_episode{0};
  std::mutex failure_mutex;
  std::uint64_t failed_stream = std::numeric_limits<std::uint64_t>::max();
  std::string failure_message;

  auto worker = [&] {
    for (;;) {
      const std::size_t e = next_episode.fetch_add(1);
      if (e >= m) return;
      try {
        matrix.rows[e] = run_to_checkpoints(config, matrix.checkpoints, e);
      } catch (const std::exception& ex) {
        std::lock_guard lock(failure_mutex);
        if (e < failed_stream) {
          failed_stream = e;
          failure_message = ex.what();
        }
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failed_stream != std::numeric_limits<std::uint64_t>::max()) {
    throw EpisodeError(failed_stream, failure_message);
  }
  return matrix;
}

RegretSummary summarize(const EpisodeMatrix& matrix) {
  RegretSummary summary;
  const std::size_t m = matrix.rows.size();
  summary.episodes = static_cast<std::int64_t>(m);
  for (std::size_t c = 0; c < matrix.checkpoints.size(); ++c) {
    double sum = 0.0;
    for (const auto& row : matrix.rows) sum += row[c];
    const double mean = sum / static_cast<double>(m);
    double sq = 0.0;
    for (const auto& row : matrix.rows) sq += (row[c] - mean) * (row[c] - mean);
    const double sd = m > 1 ? std::sqrt(sq / static_cast<double>(m - 1)) : 0.0;
    const double se = sd / std::sqrt(static_cast<double>(m));
    summary.checkpoints.push_back({matrix.checkpoints[c], mean, se, 1.96 * se});
  }
  return summary;
}

RegretSummary estimate_regret(const ExperimentConfig& config, unsigned workers) {
  return summarize(run_episodes(config, workers));
}

}  // namespace tsb
