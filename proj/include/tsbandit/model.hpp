#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tsb {

enum class RewardFamily { kBernoulli, kGaussianUnitVariance };

std::string to_string(RewardFamily family);

// A fixed environment theta. Arms are indexed 0..K-1 in code; user-facing
// output (CLI, docs) numbers them from 1.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> means, RewardFamily family);

  std::size_t num_arms() const { return means_.size(); }
  std::span<const double> means() const { return means_; }
  double mean(std::size_t arm) const { return means_.at(arm); }
  RewardFamily family() const { return family_; }

  friend bool operator==(const BanditInstance&, const BanditInstance&) = default;

 private:
  std::vector<double> means_;
  RewardFamily family_;
};

struct GapProfile {
  std::size_t best_arm = 0;
  double mu_star = 0.0;
  std::vector<double> gaps;

  double max_gap() const;
};

// Best arm (lowest index among ties), optimal mean and per-arm gaps.
GapProfile gap_profile(const BanditInstance& instance);
GapProfile gap_profile(std::span<const double> means);

// ---------------------------------------------------------------------------
// Priors over instances.

struct ProductBetaPrior {
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Theta = {theta_1, theta_2}, each with mass 1/2: theta_1 = (mu*, mu* - delta),
// theta_2 = (mu* - delta, mu*). Gaussian unit-variance rewards.
struct TwoPointPrior {
  double mu_star = 0.0;
  double delta = 1.0;

  BanditInstance atom(std::size_t which) const;
};

// Best arm uniform on [K]; the others drawn uniformly from
// [mu* - gap_max, mu* - epsilon]. Gaussian unit-variance rewards.
struct BprUniformGapPrior {
  double mu_star = 0.0;
  double epsilon = 0.5;
  std::size_t num_arms = 2;
  double gap_max = 5.0;
};

struct FiniteSupportPrior {
  std::vector<BanditInstance> atoms;
  std::vector<double> probabilities;
};

using PriorSpec = std::variant<ProductBetaPrior, TwoPointPrior,
                               BprUniformGapPrior, FiniteSupportPrior>;

// Throws ConfigError when the prior breaks its invariants.
void validate(const PriorSpec& prior);
std::size_t num_arms(const PriorSpec& prior);
RewardFamily reward_family(const PriorSpec& prior);

// ---------------------------------------------------------------------------

// Per-arm sufficient statistics: count, sum and centered sum of squares,
// updated with Welford's recurrence.
struct ArmStatistics {
  std::int64_t pulls = 0;
  double reward_sum = 0.0;
  double centered_sq_sum = 0.0;

  double mean() const { return pulls == 0 ? 0.0 : reward_sum / static_cast<double>(pulls); }
};

// Throws InvalidInputError for a non-finite reward.
ArmStatistics update_statistics(ArmStatistics stats, double reward);
void update_statistics_in_place(ArmStatistics& stats, double reward);

struct RegretTrace {
  std::uint64_t episode_seed = 0;
  std::uint64_t stream_id = 0;
  std::int64_t horizon = 0;
  std::vector<std::size_t> arms;
  std::vector<double> instant_regret;
  std::vector<double> cumulative_regret;
  GapProfile theta_summary;
};

// Prefix sum in round order; the only way cumulative regret is produced.
std::vector<double> cumulative_sum(std::span<const double> instant);

}  // namespace tsb
