#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsbandit/environments.hpp"
#include "tsbandit/model.hpp"

namespace tsb {

// History H_t through its sufficient statistics. `round` is the index t of
// the next round to be played (1-based), so sum of pulls == round - 1.
struct PolicyState {
  std::vector<ArmStatistics> per_arm;
  std::int64_t round = 1;

  explicit PolicyState(std::size_t num_arms) : per_arm(num_arms) {}
  std::size_t num_arms() const { return per_arm.size(); }
};

class Policy {
 public:
  explicit Policy(std::size_t num_arms) : state_(num_arms) {}
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  // Arm to pull at round state().round.
  virtual std::size_t select_arm(RngStream& rng) = 0;
  // Records the reward of `arm` and advances the round counter.
  void observe(std::size_t arm, double reward);

  const PolicyState& state() const { return state_; }
  std::size_t num_arms() const { return state_.num_arms(); }

 protected:
  // Called before the statistics are updated; may reject the reward.
  virtual void on_observe(std::size_t /*arm*/, double /*reward*/) {}
  virtual void after_observe(std::size_t /*arm*/) {}

  PolicyState state_;
};

// ---------------------------------------------------------------------------
// Thompson Sampling with an independent Beta prior per arm (Bernoulli rewards).

class BetaThompsonSampling final : public Policy {
 public:
  BetaThompsonSampling(std::vector<double> alpha, std::vector<double> beta);

  std::string name() const override { return "ts_beta"; }
  std::size_t select_arm(RngStream& rng) override;

  double posterior_alpha(std::size_t arm) const { return alpha_.at(arm); }
  double posterior_beta(std::size_t arm) const { return beta_.at(arm); }

 protected:
  // Throws InvalidInputError unless reward is exactly 0 or 1.
  void on_observe(std::size_t arm, double reward) override;

 private:
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

// ---------------------------------------------------------------------------
// Thompson Sampling over a finite-support prior.

struct FinitePosterior {
  std::vector<BanditInstance> atoms;
  std::vector<double> log_mass;
  std::vector<std::size_t> best_arm;  // cached argmax of each atom

  static FinitePosterior from_prior(const FiniteSupportPrior& prior);
};

FiniteSupportPrior as_finite_prior(const TwoPointPrior& prior);

// Draws an atom with probability proportional to exp(log_mass) and returns
// its best arm. Throws DegenerateWeightsError when every mass is -inf.
std::size_t ts_finite_select(const FinitePosterior& posterior, RngStream& rng);
// Adds the log-likelihood of (arm, reward) under each atom. Gaussian atoms
// use -(reward - mu)^2 / 2; Bernoulli atoms log mu or log(1 - mu).
void ts_finite_observe(FinitePosterior& posterior, std::size_t arm, double reward);
// Probability that ts_finite_select returns each arm.
std::vector<double> ts_finite_arm_distribution(const FinitePosterior& posterior);

class FiniteThompsonSampling final : public Policy {
 public:
  explicit FiniteThompsonSampling(const FiniteSupportPrior& prior);

  std::string name() const override { return "ts_finite"; }
  std::size_t select_arm(RngStream& rng) override;
  const FinitePosterior& posterior() const { return posterior_; }

 protected:
  void on_observe(std::size_t arm, double reward) override;

 private:
  FinitePosterior posterior_;
};

// ---------------------------------------------------------------------------
// Known optimal mean, two arms, gap delta.

struct TwoArmBprConstants {
  double mu_star;
  double delta;
};

// log[p_t(2) / p_t(1)] in closed form:
//   -(T1 + T2) delta^2 / 2 + T1 delta g1 + T2 delta g2,
// g1 = mu* - mean_1, g2 = mean_2 - (mu* - delta). Arm 1 is the optimal arm
// of the first hypothesis. An arm with no pulls contributes nothing.
double two_point_log_ratio(const ArmStatistics& arm1, const ArmStatistics& arm2,
                           const TwoArmBprConstants& constants);

// (p_t(1), p_t(2)) from the two Gaussian log-likelihood exponents, normalized
// in log space.
std::array<double, 2> bpr2_weights(const ArmStatistics& arm1, const ArmStatistics& arm2,
                                   const TwoArmBprConstants& constants);

class TwoArmBprPolicy final : public Policy {
 public:
  explicit TwoArmBprPolicy(TwoArmBprConstants constants);

  std::string name() const override { return "bpr2"; }
  // Rounds 1 and 2 pull arms 1 and 2 without touching the RNG; later rounds
  // consume exactly one uniform.
  std::size_t select_arm(RngStream& rng) override;
  const TwoArmBprConstants& constants() const { return constants_; }

 private:
  TwoArmBprConstants constants_;
};

// ---------------------------------------------------------------------------
// Known optimal mean mu*, every suboptimal gap at least epsilon, K arms.

struct GeneralBprConstants {
  double mu_star;
  double epsilon;
};

// Unnormalized log weight of one arm:
//   -(T/3)(mean - mu*)^2 - log_trunc_gauss_integral(mean, mu* - epsilon, T).
// The centered sum of squares cancels between numerator and denominator.
double bprk_log_weight(const ArmStatistics& stats, const GeneralBprConstants& constants);

// Normalized weights. Throws PreconditionError if some arm has no pulls.
std::vector<double> bprk_weights(std::span<const ArmStatistics> arms,
                                 const GeneralBprConstants& constants);

class GeneralBprPolicy final : public Policy {
 public:
  GeneralBprPolicy(std::size_t num_arms, GeneralBprConstants constants);

  std::string name() const override { return "bprk"; }
  // Rounds 1..K pull each arm once; later rounds consume one uniform.
  std::size_t select_arm(RngStream& rng) override;
  const GeneralBprConstants& constants() const { return constants_; }

 protected:
  void after_observe(std::size_t arm) override;

 private:
  GeneralBprConstants constants_;
  std::vector<double> log_weight_;
};

// ---------------------------------------------------------------------------
// Index policies.

// mean + sqrt(log_+(n / (K T)) / T); +inf for an unpulled arm.
double moss_index(const ArmStatistics& stats, std::int64_t horizon, std::size_t num_arms);
std::size_t moss_select(std::span<const ArmStatistics> arms, std::int64_t horizon);

// mean + sqrt(2 log t / T); +inf for an unpulled arm.
double ucb_index(const ArmStatistics& stats, std::int64_t round);
std::size_t ucb_select(std::span<const ArmStatistics> arms, std::int64_t round);

class MossPolicy final : public Policy {
 public:
  MossPolicy(std::size_t num_arms, std::int64_t horizon);
  std::string name() const override { return "moss"; }
  std::size_t select_arm(RngStream& rng) override;

 private:
  std::int64_t horizon_;
};

class UcbPolicy final : public Policy {
 public:
  explicit UcbPolicy(std::size_t num_arms) : Policy(num_arms) {}
  std::string name() const override { return "ucb"; }
  std::size_t select_arm(RngStream& rng) override;
};

// Plays the best arm of the realized instance.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const BanditInstance& instance);
  std::string name() const override { return "oracle"; }
  std::size_t select_arm(RngStream&) override { return best_arm_; }

 private:
  std::size_t best_arm_;
};

// ---------------------------------------------------------------------------

enum class PolicyKind { kThompsonBeta, kThompsonFinite, kBprTwoArm, kBprGeneral, kMoss, kUcb, kOracle };

std::string to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kThompsonBeta;
  double mu_star = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  // Thompson Sampling priors.
  std::vector<double> beta_alpha;
  std::vector<double> beta_beta;
  std::optional<FiniteSupportPrior> finite_prior;
};

// Fresh policy for one episode on `instance`. Throws ConfigError when the
// constants contradict the instance (wrong K, reward family, or a violated
// known-mean contract).
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& instance,
                                    std::int64_t horizon);

}  // namespace tsb
