#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsbandit/environments.hpp"

namespace tsb {

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double bound_value = 0.0;
  std::optional<double> empirical;
  // empirical <= bound_value, when an empirical value is attached.
  std::optional<bool> holds;

  void compare(double empirical_value);
};

// 14 sqrt(nK): prior-free Bayesian regret bound of Thompson Sampling.
double thm1_bound(std::int64_t n, std::int64_t k);
// sqrt(nK) / 20: worst-case-prior lower bound for any algorithm.
double minimax_lower_bound(std::int64_t n, std::int64_t k);
// delta + 578 / delta: two-armed known-mean policy, uniform in n.
double thm2_bound(double delta);
// sum over positive gaps of gap + (80 + log(gap / epsilon)) / gap. Zero gaps
// contribute nothing; a gap in (0, epsilon) throws DomainError.
double thm3_bound(std::span<const double> gaps, double epsilon);

// ---------------------------------------------------------------------------
// Numerical spot checks of the closed-form steps in the regret proofs.

struct IdentityCheck {
  std::string identity;
  double residual = 0.0;   // relative error, or -margin for inequalities
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::string name;
  std::vector<IdentityCheck> checks;

  bool passed() const;
  double worst_residual() const;
};

// 2 sqrt(K / n): lower integration limit of the deviation integrals.
double deviation_floor(std::int64_t n, std::int64_t k);
// 1 - 1/sqrt(3).
double step3_contraction();
// ceil(3 log(n u^2 / K) / u^2).
std::int64_t step3_split_point(double u, std::int64_t n, std::int64_t k);

// First-stage deviation integrals of the prior-free bound: antiderivatives
// by central finite differences at 100 sampled points, adaptive quadrature
// against the antiderivative difference, and the closed-form endpoint
// values 2(1 + log 2) sqrt(K/n) and (log 3 / 2) sqrt(K/n). Requires
// n / K >= 16 (PreconditionError). With throw_on_failure, any failed check
// raises VerificationError naming it.
VerificationReport verify_step2_integrals(std::int64_t n, std::int64_t k,
                                          bool throw_on_failure = true);

// Split point s(u) and geometric-series tail bound at 100 sampled
// u in [floor, 1/c].
VerificationReport verify_step3_terms(std::int64_t n, std::int64_t k,
                                      bool throw_on_failure = true);

// A_i = ceil((6 / delta^2) log(e^6 delta / epsilon)); also asserts
// A_i >= 36 / delta^2. Requires delta >= epsilon > 0 (DomainError).
std::int64_t verify_aith_threshold(double delta, double epsilon);

struct HoeffdingReport {
  std::int64_t horizon = 0;
  double threshold = 0.0;
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double frequency = 0.0;
  double bound = 0.0;
  double binomial_se = 0.0;
  bool passed = false;
};

// Monte Carlo estimate of P(exists s <= m : s * (mu - mean_s) >= x) for unit
// Gaussian samples against exp(-x^2 / (2m)). Passes when the frequency is at
// most bound + 3 binomial standard errors (SE taken at p = bound).
HoeffdingReport hoeffding_maximal_check(std::int64_t m, double x, std::int64_t trials,
                                        RngStream& rng);

}  // namespace tsb
