#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tsbandit/errors.hpp"
#include "tsbandit/policies.hpp"

using namespace tsb;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ArmStatistics stats_of(const std::vector<double>& xs) {
  ArmStatistics s;
  for (double x : xs) update_statistics_in_place(s, x);
  return s;
}

std::vector<double> gaussian_history(std::mt19937_64& gen, double mean, int len) {
  std::normal_distribution<double> normal(mean, 1.0);
  std::vector<double> xs(static_cast<std::size_t>(len));
  for (double& x : xs) x = normal(gen);
  return xs;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("ts_beta prefers a confidently better arm") {
  BetaThompsonSampling policy({1e6, 1.0}, {1.0, 1e6});
  RngStream rng(10, 0);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += policy.select_arm(rng) == 0;
  CHECK(first / 10000.0 >= 0.999);
}

TEST_CASE("ts_beta with a flat prior selects arms uniformly") {
  const std::size_t k = 4;
  BetaThompsonSampling policy(std::vector<double>(k, 1.0), std::vector<double>(k, 1.0));
  RngStream rng(11, 0);
  std::vector<int> counts(k, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[policy.select_arm(rng)];
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(draws) - 0.25) <= 0.02);
}

TEST_CASE("ts_beta conjugate update") {
  BetaThompsonSampling policy({1.0, 1.0}, {1.0, 1.0});
  policy.observe(0, 1.0);
  CHECK(policy.posterior_alpha(0) == 2.0);
  CHECK(policy.posterior_beta(0) == 1.0);
  policy.observe(1, 0.0);
  CHECK(policy.posterior_alpha(1) == 1.0);
  CHECK(policy.posterior_beta(1) == 2.0);
  CHECK_THROWS_AS(policy.observe(0, 0.5), InvalidInputError);
  CHECK(policy.state().round == 3);
}

// ---------------------------------------------------------------------------

TEST_CASE("ts_finite on the symmetric two-point prior picks each arm half the time") {
  const auto posterior = FinitePosterior::from_prior(as_finite_prior(TwoPointPrior{0.0, 1.0}));
  RngStream rng(12, 0);
  int first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) first += ts_finite_select(posterior, rng) == 0;
  CHECK(std::abs(first / static_cast<double>(draws) - 0.5) <= 0.01);
  const auto dist = ts_finite_arm_distribution(posterior);
  CHECK(dist[0] == 0.5);
  CHECK(dist[1] == 0.5);
}

TEST_CASE("ts_finite two-point posterior ratio after one pull per arm") {
  auto posterior = FinitePosterior::from_prior(as_finite_prior(TwoPointPrior{0.0, 1.0}));
  ts_finite_observe(posterior, 0, 0.0);
  ts_finite_observe(posterior, 1, -1.0);
  // theta_1 = (0, -1) explains both samples exactly; theta_2 = (-1, 0) pays
  // 1/2 + 1/2 in the exponent.
  CHECK(std::abs((posterior.log_mass[1] - posterior.log_mass[0]) - (-1.0)) <= 1e-12);
}

TEST_CASE("ts_finite posterior does not depend on observation order") {
  std::mt19937_64 gen(13);
  const FiniteSupportPrior prior{
      {BanditInstance({0.0, -0.5, -1.0}, RewardFamily::kGaussianUnitVariance),
       BanditInstance({-0.5, 0.0, -1.0}, RewardFamily::kGaussianUnitVariance),
       BanditInstance({-1.0, -0.5, 0.0}, RewardFamily::kGaussianUnitVariance)},
      {0.2, 0.3, 0.5}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::size_t, double>> batch;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 40; ++i) batch.emplace_back(gen() % 3, normal(gen));
    auto a = FinitePosterior::from_prior(prior);
    for (auto [arm, r] : batch) ts_finite_observe(a, arm, r);
    std::shuffle(batch.begin(), batch.end(), gen);
    auto b = FinitePosterior::from_prior(prior);
    for (auto [arm, r] : batch) ts_finite_observe(b, arm, r);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(a.log_mass[j] - b.log_mass[j]) <= 1e-12);
  }
}

TEST_CASE("ts_finite Bernoulli atoms with impossible outcomes") {
  const FiniteSupportPrior prior{{BanditInstance({1.0, 0.0}, RewardFamily::kBernoulli),
                                  BanditInstance({0.0, 1.0}, RewardFamily::kBernoulli)},
                                 {0.5, 0.5}};
  auto posterior = FinitePosterior::from_prior(prior);
  ts_finite_observe(posterior, 0, 1.0);
  CHECK(posterior.log_mass[1] == -kInf);
  CHECK(std::isfinite(posterior.log_mass[0]));
  RngStream rng(14, 0);
  for (int i = 0; i < 100; ++i) CHECK(ts_finite_select(posterior, rng) == 0);
  CHECK_THROWS_AS(ts_finite_observe(posterior, 0, 0.0), DegenerateWeightsError);
  CHECK_THROWS_AS(ts_finite_observe(posterior, 0, 0.3), InvalidInputError);
}

// ---------------------------------------------------------------------------

TEST_CASE("two_point_log_ratio closed form") {
  const TwoArmBprConstants c{0.0, 1.0};
  CHECK(two_point_log_ratio({}, {}, c) == 0.0);
  CHECK(std::abs(two_point_log_ratio(stats_of({0.0}), stats_of({-1.0}), c) - (-1.0)) <= 1e-12);
}

TEST_CASE("two_point_log_ratio matches the exact Bayes ratio on random histories") {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> mu(-3.0, 3.0);
  std::uniform_real_distribution<double> gap(0.05, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const TwoArmBprConstants c{mu(gen), gap(gen)};
    const auto h1 = gaussian_history(gen, c.mu_star, static_cast<int>(gen() % 60));
    const auto h2 = gaussian_history(gen, c.mu_star - c.delta, static_cast<int>(gen() % 60));
    const double exact = oracle::two_point_bayes_log_ratio(h1, h2, c.mu_star, c.delta);
    CHECK(std::abs(two_point_log_ratio(stats_of(h1), stats_of(h2), c) - exact) <= 1e-10);
  }
}

TEST_CASE("bpr2_weights") {
  const TwoArmBprConstants c{0.0, 1.0};
  const auto w = bpr2_weights(stats_of({0.0}), stats_of({-1.0}), c);
  CHECK(w[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(std::exp(-1.0) / (1.0 + std::exp(-1.0))).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(0.73106).epsilon(1e-5));
  CHECK(w[1] == doctest::Approx(0.26894).epsilon(1e-5));
}

TEST_CASE("bpr2_weights is symmetric under swapping the arms") {
  std::mt19937_64 gen(16);
  for (int trial = 0; trial < 200; ++trial) {
    const TwoArmBprConstants c{0.5, 0.3};
    const auto a = stats_of(gaussian_history(gen, 0.5, 1 + static_cast<int>(gen() % 30)));
    const auto b = stats_of(gaussian_history(gen, 0.2, 1 + static_cast<int>(gen() % 30)));
    const auto w = bpr2_weights(a, b, c);
    const auto swapped = bpr2_weights(b, a, c);
    CHECK(w[0] == swapped[1]);
    CHECK(w[1] == swapped[0]);
    CHECK(std::abs(w[0] + w[1] - 1.0) <= 1e-12);
  }
}

TEST_CASE("bpr2 bad-pull probability decays with confident optimal-arm data") {
  const TwoArmBprConstants c{1.0, 0.4};
  for (int t1 : {10, 50, 200}) {
    const auto arm1 = stats_of(std::vector<double>(static_cast<std::size_t>(t1), 1.0));
    const auto arm2 = stats_of({0.6 - 0.3, 0.6 + 0.3});  // mean at mu* - delta
    const auto w = bpr2_weights(arm1, arm2, c);
    CHECK(w[1] <= std::exp(-t1 * c.delta * c.delta / 2.0));
  }
}

TEST_CASE("bpr2_weights equals the Thompson Sampling arm distribution on the two-point prior") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> mu(-2.0, 2.0);
  std::uniform_real_distribution<double> gap(0.05, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const TwoPointPrior prior{mu(gen), gap(gen)};
    const TwoArmBprConstants c{prior.mu_star, prior.delta};
    auto posterior = FinitePosterior::from_prior(as_finite_prior(prior));
    const bool arm1_best = gen() % 2 == 0;
    const auto h1 = gaussian_history(gen, arm1_best ? c.mu_star : c.mu_star - c.delta,
                                     1 + static_cast<int>(gen() % 40));
    const auto h2 = gaussian_history(gen, arm1_best ? c.mu_star - c.delta : c.mu_star,
                                     1 + static_cast<int>(gen() % 40));
    for (double x : h1) ts_finite_observe(posterior, 0, x);
    for (double x : h2) ts_finite_observe(posterior, 1, x);
    const auto ts = ts_finite_arm_distribution(posterior);
    const auto w = bpr2_weights(stats_of(h1), stats_of(h2), c);
    const double tv = 0.5 * (std::abs(ts[0] - w[0]) + std::abs(ts[1] - w[1]));
    CHECK(tv <= 1e-10);
  }
}

TEST_CASE("TwoArmBprPolicy forces arms 1 and 2 in the first two rounds") {
  TwoArmBprPolicy policy({0.0, 1.0});
  RngStream rng(18, 0), untouched(18, 0);
  CHECK(policy.select_arm(rng) == 0);
  policy.observe(0, 0.1);
  CHECK(policy.select_arm(rng) == 1);
  policy.observe(1, -0.9);
  CHECK(rng.next_u64() == untouched.next_u64());
  const auto arm = policy.select_arm(rng);
  CHECK(arm < 2);
}

// ---------------------------------------------------------------------------

TEST_CASE("bprk_weights symmetric start") {
  const GeneralBprConstants c{0.7, 0.2};
  for (std::size_t k : {2u, 3u, 7u}) {
    std::vector<ArmStatistics> arms(k, stats_of({0.7}));
    for (double p : bprk_weights(arms, c)) CHECK(p == doctest::Approx(1.0 / k).epsilon(1e-14));
  }
}

TEST_CASE("bprk_weights match quadrature of the raw weight formula") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> shift(-1.5, 1.0);
  std::uniform_real_distribution<double> eps(0.1, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const GeneralBprConstants c{0.0, eps(gen)};
    const auto h1 = gaussian_history(gen, shift(gen), 1 + static_cast<int>(gen() % 100));
    const auto h2 = gaussian_history(gen, shift(gen), 1 + static_cast<int>(gen() % 100));
    const std::vector<ArmStatistics> arms{stats_of(h1), stats_of(h2)};
    const auto p = bprk_weights(arms, c);
    const double got = std::log(p[0]) - std::log(p[1]);
    const double want = oracle::known_mean_log_weight(h1, c.mu_star, c.epsilon) -
                        oracle::known_mean_log_weight(h2, c.mu_star, c.epsilon);
    CHECK(std::abs(got - want) <= 1e-8);
  }
}

TEST_CASE("bprk arm far below the threshold gets negligible weight") {
  const GeneralBprConstants c{0.0, 0.5};
  ArmStatistics far{50, 50 * (c.mu_star - c.epsilon - 1.0), 12.0};
  ArmStatistics top{50, 50 * c.mu_star, 12.0};
  const auto p = bprk_weights(std::vector<ArmStatistics>{far, top}, c);
  CHECK(p[0] < 1e-3 * p[1]);
}

TEST_CASE("bprk_weights depend only on differences from mu*") {
  std::mt19937_64 gen(20);
  std::uniform_real_distribution<double> offset(-100.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const GeneralBprConstants c{0.0, 0.3};
    const double shift = offset(gen);
    const GeneralBprConstants shifted_c{shift, 0.3};
    std::vector<ArmStatistics> arms, shifted;
    for (int a = 0; a < 4; ++a) {
      auto h = gaussian_history(gen, -0.5 * a, 1 + static_cast<int>(gen() % 50));
      arms.push_back(stats_of(h));
      for (double& x : h) x += shift;
      shifted.push_back(stats_of(h));
    }
    const auto p = bprk_weights(arms, c);
    const auto q = bprk_weights(shifted, shifted_c);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - q[i]) <= 1e-10);
  }
}

TEST_CASE("bprk_weights are permutation-equivariant probability vectors") {
  std::mt19937_64 gen(21);
  const GeneralBprConstants c{1.0, 0.25};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 6;
    std::vector<ArmStatistics> arms;
    for (std::size_t a = 0; a < k; ++a) {
      arms.push_back(stats_of(gaussian_history(gen, 1.0 - 0.3 * a, 1 + static_cast<int>(gen() % 30))));
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<ArmStatistics> permuted;
    for (std::size_t i = 0; i < k; ++i) permuted.push_back(arms[perm[i]]);
    const auto p = bprk_weights(arms, c);
    const auto q = bprk_weights(permuted, c);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(std::abs(q[i] - p[perm[i]]) <= 1e-12);
      CHECK(p[i] >= 0.0);
      sum += p[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("bprk_weights need every arm pulled") {
  const std::vector<ArmStatistics> arms{stats_of({0.0}), ArmStatistics{}};
  CHECK_THROWS_AS(bprk_weights(arms, {0.0, 0.5}), PreconditionError);
}

TEST_CASE("GeneralBprPolicy plays each arm once, then samples from the weights") {
  GeneralBprPolicy policy(4, {0.0, 0.5});
  RngStream rng(22, 0), untouched(22, 0);
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(policy.select_arm(rng) == a);
    policy.observe(a, -0.5 * static_cast<double>(a));
  }
  CHECK(rng.next_u64() == untouched.next_u64());
  // Cached weights match a fresh evaluation.
  for (int t = 0; t < 200; ++t) {
    const auto arm = policy.select_arm(rng);
    REQUIRE(arm < 4);
    policy.observe(arm, rng.standard_normal() - 0.5 * static_cast<double>(arm));
  }
  const auto fresh = bprk_weights(policy.state().per_arm, policy.constants());
  double sum = 0.0;
  for (double p : fresh) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

// ---------------------------------------------------------------------------

TEST_CASE("moss_index") {
  CHECK(moss_index({}, 100, 4) == kInf);
  const ArmStatistics one{1, 0.5, 0.0};
  CHECK(moss_index(one, 100, 4) == doctest::Approx(0.5 + std::sqrt(std::log(25.0))).epsilon(1e-15));
  CHECK(moss_index(one, 100, 4) == doctest::Approx(2.29412).epsilon(1e-5));
  const ArmStatistics many{25, 25 * 0.3, 1.0};
  CHECK(moss_index(many, 100, 4) == many.mean());
  const ArmStatistics more{40, 40 * 0.3, 1.0};
  CHECK(moss_index(more, 100, 4) == more.mean());
}

TEST_CASE("index policies tie-break to the lowest arm") {
  std::vector<ArmStatistics> arms(3);
  CHECK(moss_select(arms, 100) == 0);
  CHECK(ucb_select(arms, 1) == 0);

  arms[0] = {3, 1.5, 0.1};
  arms[2] = {2, 0.2, 0.1};
  CHECK(moss_select(arms, 100) == 1);
  CHECK(ucb_select(arms, 6) == 1);

  const std::vector<ArmStatistics> equal{{4, 2.0, 0.3}, {4, 2.0, 0.3}};
  CHECK(moss_select(equal, 100) == 0);
  CHECK(ucb_select(equal, 9) == 0);
  CHECK(ucb_index(equal[0], 9) == doctest::Approx(0.5 + std::sqrt(2.0 * std::log(9.0) / 4.0)));
}

// ---------------------------------------------------------------------------

TEST_CASE("make_policy checks constants against the instance") {
  const BanditInstance two({0.0, -1.0}, RewardFamily::kGaussianUnitVariance);
  PolicySpec spec;
  spec.kind = PolicyKind::kBprTwoArm;
  spec.mu_star = 0.0;
  spec.delta = 1.0;
  CHECK_NOTHROW(make_policy(spec, two, 10));
  spec.delta = 0.5;
  CHECK_THROWS_AS(make_policy(spec, two, 10), ConfigError);
  spec.delta = 1.0;
  spec.mu_star = 0.1;
  CHECK_THROWS_AS(make_policy(spec, two, 10), ConfigError);

  spec.kind = PolicyKind::kBprGeneral;
  spec.mu_star = 0.0;
  spec.epsilon = 0.5;
  const BanditInstance five({0.0, -0.5, -0.5, -1.0, -1.0}, RewardFamily::kGaussianUnitVariance);
  CHECK_NOTHROW(make_policy(spec, five, 100));
  const BanditInstance close({0.0, -0.4, -1.0}, RewardFamily::kGaussianUnitVariance);
  CHECK_THROWS_AS(make_policy(spec, close, 100), ConfigError);

  spec.kind = PolicyKind::kThompsonBeta;
  CHECK_THROWS_AS(make_policy(spec, five, 100), ConfigError);
  spec.kind = PolicyKind::kThompsonFinite;
  CHECK_THROWS_AS(make_policy(spec, five, 100), ConfigError);

  CHECK(parse_policy_kind("bprk") == PolicyKind::kBprGeneral);
  CHECK_FALSE(parse_policy_kind("policy1").has_value());
}
