#pragma once

// Test-only reference computations. Each one takes a different route from
// the library code it checks: raw sample sums instead of sufficient
// statistics, quadrature instead of erfc, two-pass instead of one-pass.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tsbandit/numerics.hpp"

namespace tsb::oracle {

struct BatchMoments {
  double mean;
  double centered_sq_sum;
};

inline BatchMoments batch_moments(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, sq};
}

inline double sum_sq_dev(std::span<const double> xs, double v) {
  double s = 0.0;
  for (double x : xs) s += (x - v) * (x - v);
  return s;
}

// log[pi_t(theta_2) / pi_t(theta_1)] from the raw Gaussian likelihood products
// of the two-point prior (arm 1 optimal under theta_1).
inline double two_point_bayes_log_ratio(std::span<const double> arm1, std::span<const double> arm2,
                                        double mu_star, double delta) {
  const double low = mu_star - delta;
  const double log_theta1 = -0.5 * sum_sq_dev(arm1, mu_star) - 0.5 * sum_sq_dev(arm2, low);
  const double log_theta2 = -0.5 * sum_sq_dev(arm1, low) - 0.5 * sum_sq_dev(arm2, mu_star);
  return log_theta2 - log_theta1;
}

// log of the integral over (-inf, upper] of exp(-(1/3) sum_s (X_s - v)^2) dv by
// adaptive quadrature on the un-completed-square integrand. The integrand is
// scaled by its value at the peak of the truncated range.
inline double log_truncated_integral(std::span<const double> xs, double upper) {
  const double t = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= t;
  const double peak = std::min(upper, mean);
  const double q_peak = -sum_sq_dev(xs, peak) / 3.0;
  const double sd = std::sqrt(3.0 / (2.0 * t));
  const double lo = peak - 40.0 * sd;
  const auto f = [&](double v) { return std::exp(-sum_sq_dev(xs, v) / 3.0 - q_peak); };
  return q_peak + std::log(tsb::quadrature(f, lo, upper, 1e-13 * sd));
}

// Known-mean log weight of one arm, straight from the raw samples.
inline double known_mean_log_weight(std::span<const double> xs, double mu_star, double epsilon) {
  return -sum_sq_dev(xs, mu_star) / 3.0 - log_truncated_integral(xs, mu_star - epsilon);
}

// Integral over [x, inf) of exp(-v^2/2), truncated where the integrand is
// below 1e-300.
inline double gaussian_tail_by_quadrature(double x) {
  const double hi = std::max(x + 1.0, 40.0);
  const double scale = std::exp(-0.5 * x * x);
  return scale * tsb::quadrature([&](double v) { return std::exp(-0.5 * (v * v - x * x)); }, x, hi,
                                 1e-12);
}

}  // namespace tsb::oracle
