#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "tsbandit/model.hpp"

namespace tsb {

// Recorded in output metadata so traces can be tied to the sampler version.
inline constexpr const char* kRngEngineName = "mt19937_64/seed_seq(seed,stream)";
inline constexpr const char* kGaussianMethodName = "marsaglia-polar";

// One independent random stream per (master seed, stream id). The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; all
// distributions are implemented here rather than taken from <random>, whose
// algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double standard_normal();
  double gamma(double shape);
  double beta(double alpha, double beta);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

BanditInstance sample_instance(const PriorSpec& prior, RngStream& rng);

// Bernoulli(mu_i) or Normal(mu_i, 1). Throws std::out_of_range for a bad arm.
double sample_reward(const BanditInstance& instance, std::size_t arm, RngStream& rng);

// Index i with probability p_i, by inverse CDF on a single uniform draw.
std::size_t sample_index(std::span<const double> probabilities, RngStream& rng);

}  // namespace tsb
