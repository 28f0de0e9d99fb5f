#include "tsbandit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "tsbandit/errors.hpp"

namespace tsb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double log_plus(double x) {
  if (!(x > 0.0)) throw DomainError("log_plus requires x > 0");
  return x >= 1.0 ? std::log(x) : 0.0;
}

double log_sum_exp(std::span<const double> log_weights) {
  double max_lw = -kInf;
  for (double v : log_weights) max_lw = std::max(max_lw, v);
  if (max_lw == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : log_weights) sum += std::exp(v - max_lw);
  return max_lw + std::log(sum);
}

std::vector<double> normalize(std::span<const double> log_weights) {
  double max_lw = -kInf;
  for (double v : log_weights) {
    if (std::isnan(v) || v == kInf) throw InvalidInputError("log weight is NaN or +inf");
    max_lw = std::max(max_lw, v);
  }
  if (max_lw == -kInf) throw DegenerateWeightsError("all log weights are -inf");

  std::vector<double> p(log_weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - max_lw);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> normalize(const LogWeightVector& lw) { return normalize(lw.log_weights); }

double log_normal_cdf(double z) {
  if (std::isnan(z)) return z;
  if (z >= -1.0) {
    if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
    return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  }
  if (z > -35.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  if (z == -kInf) return -kInf;
  // Mills-ratio expansion; the first omitted term is below 3e-15 relative here.
  const double inv_z2 = 1.0 / (z * z);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 5; ++k) {
    term *= -static_cast<double>(2 * k - 1) * inv_z2;
    series += term;
  }
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double log_trunc_gauss_integral(double center, double upper, long long samples) {
  if (samples < 1) {
    throw PreconditionError("truncated Gaussian integral needs at least one sample");
  }
  const double s = static_cast<double>(samples);
  const double z = (upper - center) * std::sqrt(2.0 * s / 3.0);
  return 0.5 * std::log(3.0 * std::numbers::pi / s) + log_normal_cdf(z);
}

TailBracket gauss_tail_bounds(double x) {
  if (!(x > 0.0)) throw DomainError("Gaussian tail bounds require x > 0");
  const double upper = std::exp(-0.5 * x * x) / x;
  return {upper * (1.0 - 1.0 / (x * x)), upper};
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15 (QUADPACK qk15 nodes and weights).

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) throw AccuracyError("integrand is not finite on the interval", kInf);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod);
  return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

}  // namespace

QuadratureResult integrate_adaptive(const Integrand& f, double lo, double hi, double tol,
                                    int max_intervals) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("quadrature needs a finite interval with lo < hi");
  }
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");

  std::vector<Segment> pending{gauss_kronrod(f, lo, hi)};
  double total_error = pending.front().error;
  int intervals = 1;
  for (;;) {
    if (total_error <= tol) {
      // The running total loses digits after huge segments are split; recount.
      total_error = 0.0;
      for (const auto& s : pending) total_error += s.error;
      if (total_error <= tol) break;
    }
    if (intervals >= max_intervals) {
      throw AccuracyError("adaptive quadrature did not converge", total_error);
    }
    std::pop_heap(pending.begin(), pending.end());
    const Segment worst = pending.back();
    pending.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = gauss_kronrod(f, worst.lo, mid);
    const Segment right = gauss_kronrod(f, mid, worst.hi);
    total_error += left.error + right.error - worst.error;
    pending.push_back(left);
    std::push_heap(pending.begin(), pending.end());
    pending.push_back(right);
    std::push_heap(pending.begin(), pending.end());
    ++intervals;
  }

  // Sum in interval order so the result does not depend on heap layout.
  std::sort(pending.begin(), pending.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  double value = 0.0;
  double error = 0.0;
  for (const auto& s : pending) {
    value += s.value;
    error += s.error;
  }
  return {value, error, intervals};
}

double quadrature(const Integrand& f, double lo, double hi, double tol) {
  return integrate_adaptive(f, lo, hi, tol).value;
}

}  // namespace tsb
