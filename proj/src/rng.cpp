#include "megtomo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace megtomo {

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: n must be positive");
  }
  // Multiply-shift map of the full 64-bit draw onto [0, n); bias is O(n/2^64).
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(engine_()) * n) >> 64);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) {
    u1 = uniform01();
  }
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::invalid_argument("poisson: mean must be >= 0");
  }
  if (mean == 0.0) {
    return 0;
  }
  if (mean < kSmallMeanCutoff) {
    return poisson_knuth(mean);
  }
  return poisson_ptrd(mean);
}

std::int64_t Rng::poisson_knuth(double mean) {
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01();
  } while (p > limit);
  return k - 1;
}

// Hormann's PTRD algorithm (transformed rejection with squeeze), exact for
// mean >= 10 and O(1) per sample at any mean.
std::int64_t Rng::poisson_ptrd(double mean) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = uniform01() - 0.5;
    const double v = uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(master);
  for (std::uint64_t w : words) {
    s = mix(s ^ w);
  }
  return s;
}

}  // namespace megtomo
