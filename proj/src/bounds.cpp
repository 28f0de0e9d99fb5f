#include "tsbandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tsbandit/errors.hpp"
#include "tsbandit/numerics.hpp"

namespace tsb {

void BoundReport::compare(double empirical_value) {
  empirical = empirical_value;
  holds = empirical_value <= bound_value;
}

namespace {

void require_arms_and_horizon(std::int64_t n, std::int64_t k) {
  if (n < 1) throw DomainError("horizon n must be at least 1");
  if (k < 2) throw DomainError("number of arms K must be at least 2");
}

double nk_root(std::int64_t n, std::int64_t k) {
  return std::sqrt(static_cast<double>(n) * static_cast<double>(k));
}

}  // namespace

double thm1_bound(std::int64_t n, std::int64_t k) {
  require_arms_and_horizon(n, k);
  return 14.0 * nk_root(n, k);
}

double minimax_lower_bound(std::int64_t n, std::int64_t k) {
  require_arms_and_horizon(n, k);
  return nk_root(n, k) / 20.0;
}

double thm2_bound(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  return delta + 578.0 / delta;
}

double thm3_bound(std::span<const double> gaps, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive");
  double total = 0.0;
  for (double gap : gaps) {
    if (gap < 0.0 || !std::isfinite(gap)) throw DomainError("gaps must be finite and nonnegative");
    if (gap == 0.0) continue;
    if (gap < epsilon) {
      throw DomainError("gap " + std::to_string(gap) + " is below epsilon (known-gap contract)");
    }
    total += gap + (80.0 + std::log(gap / epsilon)) / gap;
  }
  return total;
}

// ---------------------------------------------------------------------------

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

double VerificationReport::worst_residual() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.residual);
  return worst;
}

double deviation_floor(std::int64_t n, std::int64_t k) {
  return 2.0 * std::sqrt(static_cast<double>(k) / static_cast<double>(n));
}

double step3_contraction() { return 1.0 - 1.0 / std::numbers::sqrt3; }

std::int64_t step3_split_point(double u, std::int64_t n, std::int64_t k) {
  const double ratio = static_cast<double>(n) * u * u / static_cast<double>(k);
  return static_cast<std::int64_t>(std::ceil(3.0 * std::log(ratio) / (u * u)));
}

namespace {

constexpr int kSamplePoints = 100;
constexpr double kIdentityTolerance = 1e-6;
constexpr std::uint64_t kVerifierSeed = 0x5eedf00d;

void require_proof_regime(std::int64_t n, std::int64_t k) {
  require_arms_and_horizon(n, k);
  if (n < 16 * k) throw PreconditionError("proof verification requires n / K >= 16");
}

double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

void add_equality(VerificationReport& report, std::string identity, double got, double want) {
  const double r = relative_error(got, want);
  report.checks.push_back({std::move(identity), r, kIdentityTolerance, r <= kIdentityTolerance});
}

// lhs <= rhs, reported as residual = (lhs - rhs) / |rhs| so a pass is <= 0.
void add_inequality(VerificationReport& report, std::string identity, double lhs, double rhs) {
  const double r = (lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  report.checks.push_back({std::move(identity), r, 0.0, lhs <= rhs});
}

void finish(const VerificationReport& report, bool throw_on_failure) {
  if (!throw_on_failure) return;
  for (const auto& c : report.checks) {
    if (!c.passed) {
      throw VerificationError(report.name + ": " + c.identity + " failed (residual " +
                              std::to_string(c.residual) + ")");
    }
  }
}

double central_difference(const Integrand& f, double u) {
  const double h = 1e-5 * u;
  return (f(u + h) - f(u - h)) / (2.0 * h);
}

// Worst relative residual of F' against f at the sampled points.
double worst_derivative_residual(const Integrand& antiderivative, const Integrand& integrand,
                                 std::span<const double> points) {
  double worst = 0.0;
  for (double u : points) {
    worst = std::max(worst, relative_error(central_difference(antiderivative, u), integrand(u)));
  }
  return worst;
}

std::vector<double> sample_points(double lo, double hi, std::uint64_t stream) {
  RngStream rng(kVerifierSeed, stream);
  std::vector<double> points(kSamplePoints);
  for (double& u : points) u = lo + (hi - lo) * rng.uniform_open();
  return points;
}

}  // namespace

VerificationReport verify_step2_integrals(std::int64_t n, std::int64_t k, bool throw_on_failure) {
  require_proof_regime(n, k);
  const double nk = static_cast<double>(n) / static_cast<double>(k);
  const double scale = std::sqrt(nk);  // sqrt(n / K)
  const double lo = deviation_floor(n, k);
  VerificationReport report{"step2_integrals(n=" + std::to_string(n) + ",K=" + std::to_string(k) + ")",
                            {}};

  // (4K / (n u^2)) log(sqrt(n/K) u) and its antiderivative
  // -(4K / (n u)) log(e sqrt(n/K) u).
  const Integrand log_term = [&](double u) { return 4.0 / (nk * u * u) * std::log(scale * u); };
  const Integrand log_anti = [&](double u) {
    return -4.0 / (nk * u) * std::log(std::numbers::e * scale * u);
  };
  // 1 / (n u^2 / K - 1) and -(1/2) sqrt(K/n) log((sqrt(n/K) u + 1) / (sqrt(n/K) u - 1)).
  const Integrand pole_term = [&](double u) { return 1.0 / (nk * u * u - 1.0); };
  const Integrand pole_anti = [&](double u) {
    return -0.5 / scale * std::log((scale * u + 1.0) / (scale * u - 1.0));
  };

  const auto points = sample_points(lo, 1.0, 2);
  const double d1 = worst_derivative_residual(log_anti, log_term, points);
  report.checks.push_back({"d/du antiderivative == log integrand", d1, kIdentityTolerance,
                           d1 <= kIdentityTolerance});
  const double d2 = worst_derivative_residual(pole_anti, pole_term, points);
  report.checks.push_back({"d/du antiderivative == pole integrand", d2, kIdentityTolerance,
                           d2 <= kIdentityTolerance});

  const double log_integral = quadrature(log_term, lo, 1.0, 1e-12);
  add_equality(report, "quadrature(log integrand) == antiderivative difference", log_integral,
               log_anti(1.0) - log_anti(lo));
  const double log_bound = 2.0 * (1.0 + std::numbers::ln2) / scale;
  add_equality(report, "-antiderivative(floor) == 2(1+log 2) sqrt(K/n)", -log_anti(lo), log_bound);
  add_inequality(report, "log integral <= 2(1+log 2) sqrt(K/n)", log_integral, log_bound);

  const double pole_integral = quadrature(pole_term, lo, 1.0, 1e-12);
  add_equality(report, "quadrature(pole integrand) == antiderivative difference", pole_integral,
               pole_anti(1.0) - pole_anti(lo));
  const double pole_bound = 0.5 * std::log(3.0) / scale;
  add_equality(report, "-antiderivative(floor) == (log 3 / 2) sqrt(K/n)", -pole_anti(lo), pole_bound);
  add_inequality(report, "pole integral <= (log 3 / 2) sqrt(K/n)", pole_integral, pole_bound);

  finish(report, throw_on_failure);
  return report;
}

VerificationReport verify_step3_terms(std::int64_t n, std::int64_t k, bool throw_on_failure) {
  require_proof_regime(n, k);
  const double c = step3_contraction();
  const double lo = deviation_floor(n, k);
  VerificationReport report{"step3_terms(n=" + std::to_string(n) + ",K=" + std::to_string(k) + ")",
                            {}};

  std::int64_t min_split = std::numeric_limits<std::int64_t>::max();
  double worst_bonus = -std::numeric_limits<double>::infinity();
  double worst_series = -std::numeric_limits<double>::infinity();
  bool bonus_ok = true;
  bool series_ok = true;

  for (double u : sample_points(lo, 1.0 / c, 3)) {
    const std::int64_t split = step3_split_point(u, n, k);
    min_split = std::min(min_split, split);

    // Past the split point the exploration bonus is at most u / sqrt(3), so
    // mean + bonus - mu >= u forces mean - mu >= c u.
    const double allowed = u / std::numbers::sqrt3;
    for (std::int64_t s = std::max<std::int64_t>(split, 1); s <= n; ++s) {
      const double sd = static_cast<double>(s);
      const double bonus =
          std::sqrt(log_plus(static_cast<double>(n) / (static_cast<double>(k) * sd)) / sd);
      worst_bonus = std::max(worst_bonus, (bonus - allowed) / allowed);
      bonus_ok = bonus_ok && bonus <= allowed;
    }

    const double rate = 2.0 * c * c * u * u;
    double series = 0.0;
    for (std::int64_t s = split; s <= n; ++s) series += std::exp(-rate * static_cast<double>(s));
    const double bound = std::exp(-12.0 * c * c * std::numbers::ln2) / (-std::expm1(-rate));
    worst_series = std::max(worst_series, (series - bound) / bound);
    series_ok = series_ok && series <= bound;
  }

  report.checks.push_back({"s(u) >= 1 on [floor, 1/c]", 1.0 - static_cast<double>(min_split), 0.0,
                           min_split >= 1});
  report.checks.push_back({"bonus <= u/sqrt(3) for s >= s(u)", worst_bonus, 0.0, bonus_ok});
  report.checks.push_back({"sum_{s>=s(u)} exp(-2 s c^2 u^2) <= exp(-12 c^2 log 2)/(1-exp(-2c^2u^2))",
                           worst_series, 0.0, series_ok});
  finish(report, throw_on_failure);
  return report;
}

std::int64_t verify_aith_threshold(double delta, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive");
  if (!(delta >= epsilon) || !std::isfinite(delta)) throw DomainError("delta must be >= epsilon");
  // log(e^6 delta / epsilon) written as 6 + log(delta / epsilon) so that
  // delta == epsilon gives exactly 36 / delta^2.
  const double value = 6.0 / (delta * delta) * (6.0 + std::log(delta / epsilon));
  const auto threshold = static_cast<std::int64_t>(std::ceil(value));
  if (static_cast<double>(threshold) < 36.0 / (delta * delta)) {
    throw VerificationError("A_i < 36 / delta^2");
  }
  return threshold;
}

HoeffdingReport hoeffding_maximal_check(std::int64_t m, double x, std::int64_t trials,
                                        RngStream& rng) {
  if (m < 1) throw DomainError("horizon m must be at least 1");
  if (!(x > 0.0)) throw DomainError("threshold x must be positive");
  if (trials < 1) throw DomainError("trials must be at least 1");

  HoeffdingReport report;
  report.horizon = m;
  report.threshold = x;
  report.trials = trials;
  report.bound = std::exp(-x * x / (2.0 * static_cast<double>(m)));

  constexpr double kMean = 0.0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    double sum = 0.0;
    for (std::int64_t s = 1; s <= m; ++s) {
      sum += kMean + rng.standard_normal();
      // s * gamma_hat_s = s * (mu - mean_s) = s * mu - sum
      if (static_cast<double>(s) * kMean - sum >= x) {
        ++report.hits;
        break;
      }
    }
  }
  const double t = static_cast<double>(trials);
  report.frequency = static_cast<double>(report.hits) / t;
  report.binomial_se = std::sqrt(report.bound * (1.0 - report.bound) / t);
  report.passed = report.frequency <= report.bound + 3.0 * report.binomial_se;
  return report;
}

}  // namespace tsb
