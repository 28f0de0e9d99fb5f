#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tsbandit/bounds.hpp"
#include "tsbandit/errors.hpp"
#include "tsbandit/numerics.hpp"

using namespace tsb;

TEST_CASE("thm1 and lower bound values") {
  CHECK(thm1_bound(100, 4) == doctest::Approx(280.0).epsilon(1e-15));
  CHECK(thm1_bound(2000, 10) == doctest::Approx(1979.899).epsilon(1e-6));
  CHECK_THROWS_AS(thm1_bound(1, 1), DomainError);
  CHECK(minimax_lower_bound(100, 4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(minimax_lower_bound(2000, 10) == doctest::Approx(7.0711).epsilon(1e-5));
  CHECK_THROWS_AS(minimax_lower_bound(400, 1), DomainError);
}

TEST_CASE("thm2 values") {
  CHECK(thm2_bound(1.0) == 579.0);
  CHECK(thm2_bound(0.2) == doctest::Approx(2890.2).epsilon(1e-12));
  CHECK(thm2_bound(std::sqrt(578.0)) == doctest::Approx(2.0 * std::sqrt(578.0)).epsilon(1e-14));
  CHECK_THROWS_AS(thm2_bound(0.0), DomainError);
  CHECK_THROWS_AS(thm2_bound(-1.0), DomainError);
}

TEST_CASE("thm2 is at least its minimum") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> log_delta(-8.0, 8.0);
  const double floor = 2.0 * std::sqrt(578.0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(thm2_bound(std::exp(log_delta(gen))) >= floor * (1.0 - 1e-14));
  }
}

TEST_CASE("thm3 values") {
  const std::vector<double> a{0.0, 0.5};
  CHECK(thm3_bound(a, 0.5) == doctest::Approx(160.5).epsilon(1e-14));
  const std::vector<double> zero{0.0};
  CHECK(thm3_bound(zero, 0.3) == 0.0);
  const std::vector<double> b{0.0, 0.5, 1.0};
  const double oracle = 0.5 + (80.0 + std::log(2.0)) / 0.5 + 1.0 + (80.0 + std::log(4.0)) / 1.0;
  CHECK(thm3_bound(b, 0.25) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(thm3_bound(b, 0.25) == doctest::Approx(244.272).epsilon(1e-5));
  const std::vector<double> bad{0.0, 0.2};
  CHECK_THROWS_AS(thm3_bound(bad, 0.5), DomainError);
  CHECK_THROWS_AS(thm3_bound(a, 0.0), DomainError);
}

TEST_CASE("thm3 is nonincreasing in epsilon") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> gaps{0.0};
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
      gaps.push_back(0.05 + 2.0 * unit(gen));
      smallest = std::min(smallest, gaps.back());
    }
    const double e1 = smallest * (0.01 + 0.99 * unit(gen));
    const double e2 = e1 + (smallest - e1) * unit(gen);
    CHECK(thm3_bound(gaps, e2) <= thm3_bound(gaps, e1));
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("proof constants") {
  CHECK(step3_contraction() == doctest::Approx(0.42265).epsilon(1e-5));
  CHECK(deviation_floor(400, 4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(deviation_floor(64, 4) == doctest::Approx(0.5).epsilon(1e-15));
  // s(u) at u = 1/2: ceil(3 log 4 / 0.25) = ceil(16.636).
  CHECK(step3_split_point(0.5, 64, 4) == 17);
  CHECK(step3_split_point(0.2, 400, 4) == 104);
}

TEST_CASE("first-stage integrals close at n=400, K=4") {
  const double root = std::sqrt(4.0 / 400.0);
  const double bound = 2.0 * (1.0 + std::log(2.0)) * root;
  CHECK(bound == doctest::Approx(0.33863).epsilon(1e-4));
  const double lo = deviation_floor(400, 4);
  const auto integrand = [](double u) { return (16.0 / (400.0 * u * u)) * std::log(10.0 * u); };
  const double integral = quadrature(integrand, lo, 1.0, 1e-13);
  const double dropped = (16.0 / 400.0) * std::log(std::exp(1.0) * 10.0);
  CHECK(integral <= bound);
  CHECK(bound - integral == doctest::Approx(dropped).epsilon(1e-9));
}

TEST_CASE("proof verification passes on the grid") {
  const std::vector<std::pair<std::int64_t, std::int64_t>> grid{
      {400, 4}, {2000, 10}, {32, 2}, {80, 5}, {320, 20}};
  for (auto [n, k] : grid) {
    CAPTURE(n);
    CAPTURE(k);
    const auto step2 = verify_step2_integrals(n, k);
    CHECK(step2.passed());
    for (const auto& c : step2.checks) CHECK(c.passed);
    const auto step3 = verify_step3_terms(n, k);
    CHECK(step3.passed());
  }
}

TEST_CASE("proof verification preconditions") {
  CHECK_THROWS_AS(verify_step2_integrals(40, 4), PreconditionError);
  CHECK_THROWS_AS(verify_step3_terms(63, 4), PreconditionError);
  CHECK_NOTHROW(verify_step2_integrals(64, 4));
}

TEST_CASE("threshold A_i") {
  CHECK(verify_aith_threshold(1.0, 1.0) == 36);
  CHECK(verify_aith_threshold(1.0, 0.5) == 41);
  CHECK(verify_aith_threshold(2.0, 1.0) == 11);
  CHECK_THROWS_AS(verify_aith_threshold(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(verify_aith_threshold(1.0, 0.0), DomainError);
}

TEST_CASE("Hoeffding maximal inequality") {
  RngStream rng(3, 0);
  const auto loose = hoeffding_maximal_check(1, 3.0, 100000, rng);
  CHECK(loose.passed);
  CHECK(loose.bound == doctest::Approx(std::exp(-4.5)).epsilon(1e-14));
  // P(N(0,1) >= 3) = 0.00135.
  CHECK(std::abs(loose.frequency - 0.0013499) <= 4.0 * std::sqrt(0.00135 / 100000.0));

  const auto impossible = hoeffding_maximal_check(10, 1e6, 1000, rng);
  CHECK(impossible.hits == 0);
  CHECK(impossible.bound == 0.0);
  CHECK(impossible.passed);

  CHECK_THROWS_AS(hoeffding_maximal_check(0, 1.0, 10, rng), DomainError);
}

TEST_CASE("bound report comparison") {
  BoundReport report{"thm2", {{"delta", 1.0}}, 579.0, {}, {}};
  report.compare(12.5);
  CHECK(report.empirical == 12.5);
  CHECK(report.holds == true);
  report.compare(600.0);
  CHECK(report.holds == false);
}
