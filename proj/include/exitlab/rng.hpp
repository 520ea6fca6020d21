#pragma once

#include <cstdint>

namespace exitlab::rng {

// Philox4x32-10 counter-based generator. A stream is addressed by
// (seed, stream_id); draws within a stream walk the 128-bit counter. Streams
// with distinct ids are statistically independent, so parallel Monte Carlo
// assigns one stream per path index and results do not depend on scheduling.
//
// All variate transforms are implemented here rather than taken from
// <random>: the standard distributions are implementation-defined, and the
// reproducibility contract requires bit-identical output everywhere.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  // Uniform on (0, 1), 53-bit resolution, never exactly 0 or 1.
  double next_u01();
  double next_normal();       // Box-Muller with cached partner
  double next_exponential();  // rate 1

  // Marsaglia-Tsang; shape > 0, rate > 0.
  double next_gamma(double shape, double rate);
  // Exact Poisson (Knuth product method, split for large mean).
  std::uint64_t next_poisson(double mean);
  // Inverse Gaussian IG(delta, gamma): mean delta/gamma, shape delta^2
  // (Michael-Schucany-Haas).
  double next_inverse_gaussian(double delta, double gamma);
  // One-sided stable with E[e^{-s S}] = e^{-s^alpha}, 0 < alpha < 1
  // (Chambers-Mallows-Stuck).
  double next_stable_onesided(double alpha);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t counter_[4];
  std::uint32_t block_[4];
  int block_pos_;  // consumed 32-bit words in block_
  double cached_normal_;
  bool has_cached_normal_;
};

}  // namespace exitlab::rng
