#include "tsbandit/model.hpp"

#include <algorithm>
#include <cmath>

#include "tsbandit/errors.hpp"

namespace tsb {

std::string to_string(RewardFamily family) {
  return family == RewardFamily::kBernoulli ? "bernoulli" : "gaussian";
}

BanditInstance::BanditInstance(std::vector<double> means, RewardFamily family)
    : means_(std::move(means)), family_(family) {
  if (means_.size() < 2) throw ConfigError("bandit instance needs K >= 2 arms");
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double mu = means_[i];
    if (!std::isfinite(mu)) {
      throw ConfigError("arm " + std::to_string(i + 1) + " has a non-finite mean");
    }
    if (family_ == RewardFamily::kBernoulli && (mu < 0.0 || mu > 1.0)) {
      throw ConfigError("Bernoulli arm " + std::to_string(i + 1) +
                        " has mean outside [0,1]");
    }
  }
}

double GapProfile::max_gap() const {
  return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
}

GapProfile gap_profile(std::span<const double> means) {
  GapProfile profile;
  // std::max_element returns the first maximum, which is the tie-break rule.
  const auto best = std::max_element(means.begin(), means.end());
  profile.best_arm = static_cast<std::size_t>(best - means.begin());
  profile.mu_star = *best;
  profile.gaps.reserve(means.size());
  for (double mu : means) profile.gaps.push_back(profile.mu_star - mu);
  return profile;
}

GapProfile gap_profile(const BanditInstance& instance) {
  return gap_profile(instance.means());
}

BanditInstance TwoPointPrior::atom(std::size_t which) const {
  if (which == 0) return BanditInstance({mu_star, mu_star - delta}, RewardFamily::kGaussianUnitVariance);
  return BanditInstance({mu_star - delta, mu_star}, RewardFamily::kGaussianUnitVariance);
}

namespace {

struct Validator {
  void operator()(const ProductBetaPrior& p) const {
    if (p.alpha.size() < 2 || p.alpha.size() != p.beta.size()) {
      throw ConfigError("product Beta prior needs matching alpha/beta vectors with K >= 2");
    }
    for (std::size_t i = 0; i < p.alpha.size(); ++i) {
      if (!(p.alpha[i] > 0.0) || !(p.beta[i] > 0.0) || !std::isfinite(p.alpha[i]) ||
          !std::isfinite(p.beta[i])) {
        throw ConfigError("Beta parameters must be positive and finite");
      }
    }
  }
  void operator()(const TwoPointPrior& p) const {
    if (!std::isfinite(p.mu_star)) throw ConfigError("two-point prior: mu_star must be finite");
    if (!(p.delta > 0.0) || !std::isfinite(p.delta)) {
      throw ConfigError("two-point prior: delta must be positive");
    }
  }
  void operator()(const BprUniformGapPrior& p) const {
    if (p.num_arms < 2) throw ConfigError("BPR prior needs K >= 2");
    if (!std::isfinite(p.mu_star)) throw ConfigError("BPR prior: mu_star must be finite");
    if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) {
      throw ConfigError("BPR prior: epsilon must be positive");
    }
    if (!(p.gap_max >= p.epsilon) || !std::isfinite(p.gap_max)) {
      throw ConfigError("BPR prior: gap_max must be finite and >= epsilon");
    }
  }
  void operator()(const FiniteSupportPrior& p) const {
    if (p.atoms.empty() || p.atoms.size() != p.probabilities.size()) {
      throw ConfigError("finite prior needs one probability per atom");
    }
    double total = 0.0;
    for (double w : p.probabilities) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ConfigError("finite prior probabilities must be nonnegative");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ConfigError("finite prior probabilities must sum to 1");
    }
    for (const auto& atom : p.atoms) {
      if (atom.num_arms() != p.atoms.front().num_arms() ||
          atom.family() != p.atoms.front().family()) {
        throw ConfigError("finite prior atoms must share K and reward family");
      }
    }
  }
};

}  // namespace

void validate(const PriorSpec& prior) { std::visit(Validator{}, prior); }

std::size_t num_arms(const PriorSpec& prior) {
  struct {
    std::size_t operator()(const ProductBetaPrior& p) const { return p.alpha.size(); }
    std::size_t operator()(const TwoPointPrior&) const { return 2; }
    std::size_t operator()(const BprUniformGapPrior& p) const { return p.num_arms; }
    std::size_t operator()(const FiniteSupportPrior& p) const {
      return p.atoms.empty() ? 0 : p.atoms.front().num_arms();
    }
  } visitor;
  return std::visit(visitor, prior);
}

RewardFamily reward_family(const PriorSpec& prior) {
  if (std::holds_alternative<ProductBetaPrior>(prior)) return RewardFamily::kBernoulli;
  if (const auto* finite = std::get_if<FiniteSupportPrior>(&prior)) {
    if (!finite->atoms.empty()) return finite->atoms.front().family();
  }
  return RewardFamily::kGaussianUnitVariance;
}

void update_statistics_in_place(ArmStatistics& stats, double reward) {
  if (!std::isfinite(reward)) throw InvalidInputError("reward must be finite");
  const double old_mean = stats.mean();
  stats.pulls += 1;
  stats.reward_sum += reward;
  const double delta = reward - old_mean;
  const double new_mean = old_mean + delta / static_cast<double>(stats.pulls);
  stats.centered_sq_sum += delta * (reward - new_mean);
  if (stats.centered_sq_sum < 0.0) stats.centered_sq_sum = 0.0;
}

ArmStatistics update_statistics(ArmStatistics stats, double reward) {
  update_statistics_in_place(stats, reward);
  return stats;
}

std::vector<double> cumulative_sum(std::span<const double> instant) {
  std::vector<double> out;
  out.reserve(instant.size());
  double running = 0.0;
  for (double r : instant) {
    running += r;
    out.push_back(running);
  }
  return out;
}

}  // namespace tsb
