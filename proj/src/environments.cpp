#include "tsbandit/environments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tsbandit/errors.hpp"

namespace tsb {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x7473626eU};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::standard_normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  return u * factor;
}

// Marsaglia-Tsang; shapes below 1 are boosted by U^{1/shape}.
double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(uniform_open(), 1.0 / shape);
    return gamma(shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::beta(double alpha, double beta) {
  const double x = gamma(alpha);
  const double y = gamma(beta);
  return x / (x + y);
}

std::size_t sample_index(std::span<const double> probabilities, RngStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > 0.0) last_positive = i;
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // u landed in the rounding slack above the accumulated total.
  return last_positive;
}

namespace {

struct InstanceSampler {
  RngStream& rng;

  BanditInstance operator()(const ProductBetaPrior& p) const {
    std::vector<double> means(p.alpha.size());
    for (std::size_t i = 0; i < means.size(); ++i) means[i] = rng.beta(p.alpha[i], p.beta[i]);
    return BanditInstance(std::move(means), RewardFamily::kBernoulli);
  }
  BanditInstance operator()(const TwoPointPrior& p) const {
    return p.atom(rng.uniform() < 0.5 ? 0 : 1);
  }
  BanditInstance operator()(const BprUniformGapPrior& p) const {
    const auto k = p.num_arms;
    auto best = static_cast<std::size_t>(rng.uniform() * static_cast<double>(k));
    if (best >= k) best = k - 1;
    std::vector<double> means(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == best) {
        means[i] = p.mu_star;
      } else {
        const double gap = p.epsilon + rng.uniform() * (p.gap_max - p.epsilon);
        means[i] = p.mu_star - std::max(gap, p.epsilon);
      }
    }
    return BanditInstance(std::move(means), RewardFamily::kGaussianUnitVariance);
  }
  BanditInstance operator()(const FiniteSupportPrior& p) const {
    return p.atoms[sample_index(p.probabilities, rng)];
  }
};

}  // namespace

BanditInstance sample_instance(const PriorSpec& prior, RngStream& rng) {
  validate(prior);
  return std::visit(InstanceSampler{rng}, prior);
}

double sample_reward(const BanditInstance& instance, std::size_t arm, RngStream& rng) {
  if (arm >= instance.num_arms()) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
  }
  const double mu = instance.mean(arm);
  if (instance.family() == RewardFamily::kBernoulli) return rng.uniform() < mu ? 1.0 : 0.0;
  return mu + rng.standard_normal();
}

}  // namespace tsb
