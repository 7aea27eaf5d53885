#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "megtomo/measurements.hpp"
#include "megtomo/rng.hpp"

namespace megtomo {

/// Expected photon numbers per measurement window (the window is one second,
/// so a rate in Hz equals the expected count per setting).
struct NoiseConfig {
  double signal_rate = 1e6;
  double dark_rate = 0.0;
  double background_rate = 0.0;
  double extra_background_rate = 0.0;  // e.g. a light bulb near the detector

  static constexpr double kSnrEpsilon = 1e-12;

  /// signal / (dark + background + extra), denominator floored at kSnrEpsilon.
  double snr() const;
  void validate() const;
};

/// Raw counts for one iteration and the probabilities derived from them.
struct CountRecord {
  std::string basis_label;
  std::vector<std::int64_t> counts;
  std::vector<double> probabilities;
  bool degenerate = false;  // set when even the retry produced zero total counts
};

/// Per-setting Poisson means: signal * |<psi_i|psi>|^2 plus the dark,
/// background and extra-background offsets, independently for each of the d
/// sequential settings.
std::vector<double> expected_counts(const PureState& psi, const MeasurementBasis& basis,
                                    const NoiseConfig& noise);

/// Independent Poisson draw per setting.
std::vector<std::int64_t> sample_counts(const std::vector<double>& means, Rng& rng);

/// One full iteration: expected counts, Poisson sampling, normalization by
/// the total. An all-zero total triggers one resample; if that is zero too
/// the record is flagged degenerate and carries uniform probabilities.
CountRecord measure_iteration(const PureState& psi, const MeasurementBasis& basis,
                              const NoiseConfig& noise, Rng& rng);

}  // namespace megtomo
