#include "tsbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsbandit/errors.hpp"
#include "tsbandit/numerics.hpp"

namespace tsb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContractTolerance = 1e-12;

std::size_t argmax_lowest(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}
}  // namespace

void Policy::observe(std::size_t arm, double reward) {
  if (arm >= state_.num_arms()) throw std::out_of_range("observed arm out of range");
  if (!std::isfinite(reward)) throw InvalidInputError("reward must be finite");
  on_observe(arm, reward);
  update_statistics_in_place(state_.per_arm[arm], reward);
  ++state_.round;
  after_observe(arm);
}

// ---------------------------------------------------------------------------

BetaThompsonSampling::BetaThompsonSampling(std::vector<double> alpha, std::vector<double> beta)
    : Policy(alpha.size()), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.size() < 2 || alpha_.size() != beta_.size()) {
    throw ConfigError("ts_beta needs one (alpha, beta) pair per arm, K >= 2");
  }
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (!(alpha_[i] > 0.0) || !(beta_[i] > 0.0)) {
      throw ConfigError("ts_beta prior parameters must be positive");
    }
  }
}

std::size_t BetaThompsonSampling::select_arm(RngStream& rng) {
  std::size_t best = 0;
  double best_draw = -kInf;
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    const double draw = rng.beta(alpha_[i], beta_[i]);
    if (draw > best_draw) {
      best_draw = draw;
      best = i;
    }
  }
  return best;
}

void BetaThompsonSampling::on_observe(std::size_t arm, double reward) {
  if (reward == 1.0) {
    alpha_[arm] += 1.0;
  } else if (reward == 0.0) {
    beta_[arm] += 1.0;
  } else {
    throw InvalidInputError("ts_beta expects binary rewards");
  }
}

// ---------------------------------------------------------------------------

FinitePosterior FinitePosterior::from_prior(const FiniteSupportPrior& prior) {
  validate(PriorSpec{prior});
  FinitePosterior posterior;
  posterior.atoms = prior.atoms;
  for (std::size_t j = 0; j < prior.atoms.size(); ++j) {
    const double w = prior.probabilities[j];
    posterior.log_mass.push_back(w > 0.0 ? std::log(w) : -kInf);
    posterior.best_arm.push_back(gap_profile(prior.atoms[j]).best_arm);
  }
  return posterior;
}

FiniteSupportPrior as_finite_prior(const TwoPointPrior& prior) {
  return FiniteSupportPrior{{prior.atom(0), prior.atom(1)}, {0.5, 0.5}};
}

std::size_t ts_finite_select(const FinitePosterior& posterior, RngStream& rng) {
  const auto p = normalize(posterior.log_mass);
  return posterior.best_arm[sample_index(p, rng)];
}

void ts_finite_observe(FinitePosterior& posterior, std::size_t arm, double reward) {
  if (!std::isfinite(reward)) throw InvalidInputError("reward must be finite");
  bool any_alive = false;
  for (std::size_t j = 0; j < posterior.atoms.size(); ++j) {
    const auto& atom = posterior.atoms[j];
    const double mu = atom.mean(arm);
    double log_lik;
    if (atom.family() == RewardFamily::kGaussianUnitVariance) {
      const double r = reward - mu;
      log_lik = -0.5 * r * r;
    } else if (reward == 1.0) {
      log_lik = mu > 0.0 ? std::log(mu) : -kInf;
    } else if (reward == 0.0) {
      log_lik = mu < 1.0 ? std::log1p(-mu) : -kInf;
    } else {
      throw InvalidInputError("Bernoulli posterior expects binary rewards");
    }
    posterior.log_mass[j] += log_lik;
    any_alive = any_alive || posterior.log_mass[j] > -kInf;
  }
  if (!any_alive) throw DegenerateWeightsError("every posterior atom has zero mass");
}

std::vector<double> ts_finite_arm_distribution(const FinitePosterior& posterior) {
  const auto p = normalize(posterior.log_mass);
  std::vector<double> arm_prob(posterior.atoms.front().num_arms(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) arm_prob[posterior.best_arm[j]] += p[j];
  return arm_prob;
}

FiniteThompsonSampling::FiniteThompsonSampling(const FiniteSupportPrior& prior)
    : Policy(prior.atoms.empty() ? 0 : prior.atoms.front().num_arms()),
      posterior_(FinitePosterior::from_prior(prior)) {}

std::size_t FiniteThompsonSampling::select_arm(RngStream& rng) {
  return ts_finite_select(posterior_, rng);
}

void FiniteThompsonSampling::on_observe(std::size_t arm, double reward) {
  ts_finite_observe(posterior_, arm, reward);
}

// ---------------------------------------------------------------------------

double two_point_log_ratio(const ArmStatistics& arm1, const ArmStatistics& arm2,
                           const TwoArmBprConstants& c) {
  const double t1 = static_cast<double>(arm1.pulls);
  const double t2 = static_cast<double>(arm2.pulls);
  const double gamma1 = arm1.pulls > 0 ? c.mu_star - arm1.mean() : 0.0;
  const double gamma2 = arm2.pulls > 0 ? arm2.mean() - (c.mu_star - c.delta) : 0.0;
  return -0.5 * (t1 + t2) * c.delta * c.delta + t1 * c.delta * gamma1 + t2 * c.delta * gamma2;
}

namespace {

// -(1/2) sum_s (target - X_s)^2 from the sufficient statistics.
double gaussian_exponent(const ArmStatistics& s, double target) {
  if (s.pulls == 0) return 0.0;
  const double d = s.mean() - target;
  return -0.5 * (static_cast<double>(s.pulls) * d * d + s.centered_sq_sum);
}

}  // namespace

std::array<double, 2> bpr2_weights(const ArmStatistics& arm1, const ArmStatistics& arm2,
                                   const TwoArmBprConstants& c) {
  const double low = c.mu_star - c.delta;
  const double log_p1 = gaussian_exponent(arm1, c.mu_star) + gaussian_exponent(arm2, low);
  const double log_p2 = gaussian_exponent(arm1, low) + gaussian_exponent(arm2, c.mu_star);
  const std::array<double, 2> lw{log_p1, log_p2};
  const auto p = normalize(lw);
  return {p[0], p[1]};
}

TwoArmBprPolicy::TwoArmBprPolicy(TwoArmBprConstants constants)
    : Policy(2), constants_(constants) {
  if (!(constants_.delta > 0.0) || !std::isfinite(constants_.mu_star)) {
    throw ConfigError("bpr2 needs finite mu_star and delta > 0");
  }
}

std::size_t TwoArmBprPolicy::select_arm(RngStream& rng) {
  if (state_.round <= 2) return static_cast<std::size_t>(state_.round - 1);
  const auto p = bpr2_weights(state_.per_arm[0], state_.per_arm[1], constants_);
  return sample_index(p, rng);
}

// ---------------------------------------------------------------------------

double bprk_log_weight(const ArmStatistics& stats, const GeneralBprConstants& c) {
  if (stats.pulls < 1) throw PreconditionError("bprk weights need every arm pulled at least once");
  const double mean = stats.mean();
  const double d = mean - c.mu_star;
  return -static_cast<double>(stats.pulls) / 3.0 * d * d -
         log_trunc_gauss_integral(mean, c.mu_star - c.epsilon, stats.pulls);
}

std::vector<double> bprk_weights(std::span<const ArmStatistics> arms, const GeneralBprConstants& c) {
  std::vector<double> lw;
  lw.reserve(arms.size());
  for (const auto& s : arms) lw.push_back(bprk_log_weight(s, c));
  return normalize(lw);
}

GeneralBprPolicy::GeneralBprPolicy(std::size_t num_arms, GeneralBprConstants constants)
    : Policy(num_arms), constants_(constants), log_weight_(num_arms, 0.0) {
  if (num_arms < 2) throw ConfigError("bprk needs K >= 2");
  if (!(constants_.epsilon > 0.0) || !std::isfinite(constants_.mu_star)) {
    throw ConfigError("bprk needs finite mu_star and epsilon > 0");
  }
}

std::size_t GeneralBprPolicy::select_arm(RngStream& rng) {
  const auto k = static_cast<std::int64_t>(num_arms());
  if (state_.round <= k) return static_cast<std::size_t>(state_.round - 1);
  return sample_index(normalize(log_weight_), rng);
}

// Only the observed arm's weight changes between rounds.
void GeneralBprPolicy::after_observe(std::size_t arm) {
  log_weight_[arm] = bprk_log_weight(state_.per_arm[arm], constants_);
}

// ---------------------------------------------------------------------------

double moss_index(const ArmStatistics& stats, std::int64_t horizon, std::size_t num_arms) {
  if (stats.pulls == 0) return kInf;
  const double t = static_cast<double>(stats.pulls);
  const double ratio = static_cast<double>(horizon) / (static_cast<double>(num_arms) * t);
  return stats.mean() + std::sqrt(log_plus(ratio) / t);
}

std::size_t moss_select(std::span<const ArmStatistics> arms, std::int64_t horizon) {
  std::vector<double> index;
  index.reserve(arms.size());
  for (const auto& s : arms) index.push_back(moss_index(s, horizon, arms.size()));
  return argmax_lowest(index);
}

double ucb_index(const ArmStatistics& stats, std::int64_t round) {
  if (stats.pulls == 0) return kInf;
  const double log_t = std::log(static_cast<double>(std::max<std::int64_t>(round, 1)));
  return stats.mean() + std::sqrt(2.0 * log_t / static_cast<double>(stats.pulls));
}

std::size_t ucb_select(std::span<const ArmStatistics> arms, std::int64_t round) {
  std::vector<double> index;
  index.reserve(arms.size());
  for (const auto& s : arms) index.push_back(ucb_index(s, round));
  return argmax_lowest(index);
}

MossPolicy::MossPolicy(std::size_t num_arms, std::int64_t horizon)
    : Policy(num_arms), horizon_(horizon) {
  if (horizon_ < static_cast<std::int64_t>(num_arms)) throw ConfigError("moss needs n >= K");
}

std::size_t MossPolicy::select_arm(RngStream&) { return moss_select(state_.per_arm, horizon_); }

std::size_t UcbPolicy::select_arm(RngStream&) { return ucb_select(state_.per_arm, state_.round); }

OraclePolicy::OraclePolicy(const BanditInstance& instance)
    : Policy(instance.num_arms()), best_arm_(gap_profile(instance).best_arm) {}

// ---------------------------------------------------------------------------

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kThompsonBeta: return "ts_beta";
    case PolicyKind::kThompsonFinite: return "ts_finite";
    case PolicyKind::kBprTwoArm: return "bpr2";
    case PolicyKind::kBprGeneral: return "bprk";
    case PolicyKind::kMoss: return "moss";
    case PolicyKind::kUcb: return "ucb";
    case PolicyKind::kOracle: return "oracle";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::kThompsonBeta, PolicyKind::kThompsonFinite, PolicyKind::kBprTwoArm,
                    PolicyKind::kBprGeneral, PolicyKind::kMoss, PolicyKind::kUcb,
                    PolicyKind::kOracle}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

namespace {

void check_known_mean(const BanditInstance& instance, double mu_star) {
  const auto profile = gap_profile(instance);
  if (std::abs(profile.mu_star - mu_star) > kContractTolerance) {
    throw ConfigError("instance's best mean " + std::to_string(profile.mu_star) +
                      " does not equal the policy's mu_star " + std::to_string(mu_star));
  }
}

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& instance,
                                    std::int64_t horizon) {
  const std::size_t k = instance.num_arms();
  switch (spec.kind) {
    case PolicyKind::kThompsonBeta: {
      if (instance.family() != RewardFamily::kBernoulli) {
        throw ConfigError("ts_beta requires Bernoulli rewards");
      }
      auto alpha = spec.beta_alpha.empty() ? std::vector<double>(k, 1.0) : spec.beta_alpha;
      auto beta = spec.beta_beta.empty() ? std::vector<double>(k, 1.0) : spec.beta_beta;
      if (alpha.size() != k || beta.size() != k) {
        throw ConfigError("ts_beta prior size does not match K");
      }
      return std::make_unique<BetaThompsonSampling>(std::move(alpha), std::move(beta));
    }
    case PolicyKind::kThompsonFinite: {
      if (!spec.finite_prior) throw ConfigError("ts_finite requires a finite-support prior");
      const auto& atoms = spec.finite_prior->atoms;
      if (atoms.empty() || atoms.front().num_arms() != k ||
          atoms.front().family() != instance.family()) {
        throw ConfigError("ts_finite prior atoms do not match the environment");
      }
      return std::make_unique<FiniteThompsonSampling>(*spec.finite_prior);
    }
    case PolicyKind::kBprTwoArm: {
      if (k != 2) throw ConfigError("bpr2 requires exactly two arms");
      check_known_mean(instance, spec.mu_star);
      const auto profile = gap_profile(instance);
      const double other = instance.mean(1 - profile.best_arm);
      if (std::abs((spec.mu_star - spec.delta) - other) > kContractTolerance) {
        throw ConfigError("instance gap does not equal the policy's delta");
      }
      return std::make_unique<TwoArmBprPolicy>(TwoArmBprConstants{spec.mu_star, spec.delta});
    }
    case PolicyKind::kBprGeneral: {
      check_known_mean(instance, spec.mu_star);
      const auto profile = gap_profile(instance);
      for (std::size_t i = 0; i < k; ++i) {
        if (i == profile.best_arm) continue;
        if (instance.mean(i) > spec.mu_star - spec.epsilon + kContractTolerance) {
          throw ConfigError("arm " + std::to_string(i + 1) +
                            " violates the known-gap contract (mean > mu_star - epsilon)");
        }
      }
      return std::make_unique<GeneralBprPolicy>(
          k, GeneralBprConstants{spec.mu_star, spec.epsilon});
    }
    case PolicyKind::kMoss:
      return std::make_unique<MossPolicy>(k, horizon);
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(k);
    case PolicyKind::kOracle:
      return std::make_unique<OraclePolicy>(instance);
  }
  throw ConfigError("unknown policy kind");
}

}  // namespace tsb
