#include "exitlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace exitlab::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::uint32_t mulhi(std::uint32_t a, std::uint32_t b, std::uint32_t* lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *lo = static_cast<std::uint32_t>(p);
  return static_cast<std::uint32_t>(p >> 32);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : block_pos_(4), cached_normal_(0.0), has_cached_normal_(false) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  counter_[0] = 0;
  counter_[1] = 0;
  counter_[2] = static_cast<std::uint32_t>(stream_id);
  counter_[3] = static_cast<std::uint32_t>(stream_id >> 32);
}

void Stream::refill() {
  std::uint32_t x0 = counter_[0], x1 = counter_[1], x2 = counter_[2], x3 = counter_[3];
  std::uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, lo1;
    std::uint32_t hi0 = mulhi(kPhiloxM0, x0, &lo0);
    std::uint32_t hi1 = mulhi(kPhiloxM1, x2, &lo1);
    std::uint32_t y0 = hi1 ^ x1 ^ k0;
    std::uint32_t y1 = lo1;
    std::uint32_t y2 = hi0 ^ x3 ^ k1;
    std::uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  block_[0] = x0;
  block_[1] = x1;
  block_[2] = x2;
  block_[3] = x3;
  block_pos_ = 0;
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit in-stream counter is ample
}

std::uint64_t Stream::next_u64() {
  if (block_pos_ > 2) refill();
  std::uint64_t lo = block_[block_pos_];
  std::uint64_t hi = block_[block_pos_ + 1];
  block_pos_ += 2;
  return (hi << 32) | lo;
}

double Stream::next_u01() {
  std::uint64_t bits = next_u64() >> 11;  // 53 bits
  double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  return u;
}

double Stream::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = next_u01();
  double u2 = next_u01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * kPi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double Stream::next_exponential() { return -std::log(next_u01()); }

double Stream::next_gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("next_gamma: requires shape > 0 and rate > 0");
  }
  if (shape < 1.0) {
    // Boost: G(shape) = G(shape + 1) * U^{1/shape}.
    double g = next_gamma(shape + 1.0, 1.0);
    double u = next_u01();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = next_normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = next_u01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

std::uint64_t Stream::next_poisson(double mean) {
  if (!(mean >= 0.0)) throw std::domain_error("next_poisson: requires mean >= 0");
  if (mean == 0.0) return 0;
  if (mean > 30.0) {
    // Exact split: Poisson(m) = sum of independent Poisson(m / n) pieces.
    int n = static_cast<int>(std::ceil(mean / 30.0));
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) total += next_poisson(mean / n);
    return total;
  }
  double limit = std::exp(-mean);
  std::uint64_t count = 0;
  double prod = next_u01();
  while (prod > limit) {
    ++count;
    prod *= next_u01();
  }
  return count;
}

double Stream::next_inverse_gaussian(double delta, double gamma) {
  if (!(delta > 0.0) || !(gamma > 0.0)) {
    throw std::domain_error("next_inverse_gaussian: requires delta > 0 and gamma > 0");
  }
  const double mu = delta / gamma;
  const double lambda = delta * delta;
  double z = next_normal();
  double y = z * z;
  double w = mu * y;
  double x = mu + mu / (2.0 * lambda) * (w - std::sqrt(w * (4.0 * lambda + w)));
  double u = next_u01();
  if (u <= mu / (mu + x)) return x;
  return mu * mu / x;
}

double Stream::next_stable_onesided(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("next_stable_onesided: requires 0 < alpha < 1");
  }
  double u = kPi * next_u01();
  double e = next_exponential();
  double s = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
             std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return s;
}

}  // namespace exitlab::rng
