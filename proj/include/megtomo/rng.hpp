#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace megtomo {

/// Seedable random stream used by every stochastic component.
///
/// The raw 64-bit stream comes from std::mt19937_64, whose output sequence is
/// fixed by the standard, so identical seeds give identical streams on every
/// platform. Real-valued draws (uniform, normal, Poisson) are derived here
/// rather than through std:: distributions, which are implementation-defined
/// and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal();

  /// Exact Poisson sample. Knuth's product method below kSmallMeanCutoff,
  /// Hormann's PTRD transformed rejection above it. mean must be >= 0;
  /// mean 0 always yields 0.
  std::int64_t poisson(double mean);

  static constexpr double kSmallMeanCutoff = 30.0;

 private:
  std::int64_t poisson_knuth(double mean);
  std::int64_t poisson_ptrd(double mean);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministically derives a child seed from a master seed and a list of
/// index words (state index, repeat index, stream tag, ...). SplitMix64
/// finalizer folded over the words; stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words);

// Stream tags for derive_seed, so distinct per-run streams never collide.
inline constexpr std::uint64_t kSeedTagState = 0x5354415445ull;      // Haar state draw
inline constexpr std::uint64_t kSeedTagGenerator = 0x47454e4552ull;  // random evolution generator
inline constexpr std::uint64_t kSeedTagRun = 0x52554eull;            // per-run measurement stream

}  // namespace megtomo
