#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tsb {

// log(x) for x >= 1, else 0. Throws DomainError for x <= 0.
double log_plus(double x);

// log(sum_i exp(v_i)); -inf when every entry is -inf.
double log_sum_exp(std::span<const double> log_weights);

// Unnormalized natural-log weights. Entries are finite or -inf.
struct LogWeightVector {
  std::vector<double> log_weights;
};

// p_i = exp(lw_i - logsumexp(lw)). Throws DegenerateWeightsError when no
// entry is finite and InvalidInputError on NaN or +inf entries.
std::vector<double> normalize(const LogWeightVector& lw);
std::vector<double> normalize(std::span<const double> log_weights);

// log Phi(z) for the standard normal CDF. Below z = -1 the value comes from
// erfc (and its asymptotic expansion once erfc underflows), so the far left
// tail keeps full relative precision.
double log_normal_cdf(double z);

// log of the integral over (-inf, upper] of exp(-(samples/3) (v - center)^2) dv,
// i.e. log[ sqrt(3 pi / samples) * Phi((upper - center) sqrt(2 samples / 3)) ].
// Requires samples >= 1 (PreconditionError otherwise).
double log_trunc_gauss_integral(double center, double upper, long long samples);

struct TailBracket {
  double lower;
  double upper;
};

// Bracket for the Gaussian tail integral over [x, inf) of exp(-v^2/2):
// (1/x)(1 - 1/x^2) e^{-x^2/2} <= tail <= (1/x) e^{-x^2/2}. x > 0.
TailBracket gauss_tail_bounds(double x);

struct QuadratureResult {
  double value;
  double error_bound;
  int intervals;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) on the finite interval [lo, hi], bisecting
// the interval with the largest error estimate until the summed estimate is
// below tol. Throws AccuracyError if max_intervals is exhausted first.
QuadratureResult integrate_adaptive(const Integrand& f, double lo, double hi, double tol,
                                    int max_intervals = 2000);
double quadrature(const Integrand& f, double lo, double hi, double tol);

}  // namespace tsb
