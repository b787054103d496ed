#include "stoparea/rng.h"

#include <cmath>
#include <stdexcept>

namespace stoparea {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(RngState state) {
  // Fold the stream id into the splitmix chain so that streams with the same
  // seed are decorrelated from the first output onwards.
  std::uint64_t x = state.seed;
  x ^= 0x9E3779B97F4A7C15ULL * (state.stream_id + 1);
  x ^= rotl(state.stream_id, 17);
  for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53 random bits, centred: strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * M_PI * uniform();
  spare_normal_ = r * std::sin(theta);
  have_spare_normal_ = true;
  return r * std::cos(theta);
}

double Rng::exponential() {
  return -std::log(uniform());
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean > 30.0) {
    const double half = 0.5 * mean;
    return poisson(half) + poisson(mean - half);
  }
  const double threshold = std::exp(-mean);
  std::uint64_t k = 0;
  double p = uniform();
  while (p > threshold) {
    ++k;
    p *= uniform();
  }
  return k;
}

}  // namespace stoparea
