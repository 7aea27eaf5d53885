#include "megtomo/photon_sim.hpp"

#include <numeric>
#include <stdexcept>

namespace megtomo {

double NoiseConfig::snr() const {
  const double noise = dark_rate + background_rate + extra_background_rate;
  return signal_rate / std::max(noise, kSnrEpsilon);
}

void NoiseConfig::validate() const {
  if (signal_rate < 0 || dark_rate < 0 || background_rate < 0 || extra_background_rate < 0) {
    throw std::invalid_argument("NoiseConfig: all rates must be >= 0");
  }
}

std::vector<double> expected_counts(const PureState& psi, const MeasurementBasis& basis,
                                    const NoiseConfig& noise) {
  if (psi.dim() != basis.dim()) {
    throw std::invalid_argument("expected_counts: state and basis dimensions differ");
  }
  noise.validate();
  const double offset = noise.dark_rate + noise.background_rate + noise.extra_background_rate;
  std::vector<double> means(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    means[i] = noise.signal_rate * psi.overlap(basis.state(i)) + offset;
  }
  return means;
}

std::vector<std::int64_t> sample_counts(const std::vector<double>& means, Rng& rng) {
  std::vector<std::int64_t> counts(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    counts[i] = rng.poisson(means[i]);
  }
  return counts;
}

CountRecord measure_iteration(const PureState& psi, const MeasurementBasis& basis,
                              const NoiseConfig& noise, Rng& rng) {
  const auto means = expected_counts(psi, basis, noise);
  CountRecord rec;
  rec.basis_label = basis.label();
  rec.counts = sample_counts(means, rng);
  auto total = std::accumulate(rec.counts.begin(), rec.counts.end(), std::int64_t{0});
  if (total == 0) {
    rec.counts = sample_counts(means, rng);
    total = std::accumulate(rec.counts.begin(), rec.counts.end(), std::int64_t{0});
  }
  const int d = basis.size();
  rec.probabilities.resize(d);
  if (total == 0) {
    rec.degenerate = true;
    std::fill(rec.probabilities.begin(), rec.probabilities.end(), 1.0 / d);
  } else {
    for (int i = 0; i < d; ++i) {
      rec.probabilities[i] = static_cast<double>(rec.counts[i]) / static_cast<double>(total);
    }
  }
  return rec;
}

}  // namespace megtomo
