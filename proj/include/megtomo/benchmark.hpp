#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "megtomo/estimator.hpp"
#include "megtomo/measurements.hpp"
#include "megtomo/photon_sim.hpp"

namespace megtomo {

enum class Evolution { Stationary, PauliZ, RandomHermitian };

std::string evolution_name(Evolution evolution);
Evolution evolution_from_name(const std::string& name);

// Full description of one benchmark scenario. Defaults follow the reference
// qutrit experiment: MUB measurements, 10^6 signal photons per window, 100
// dark and 50 background counts, eta = 5, 300 iterations, 50 Haar states.
struct ScenarioConfig {
  int dim = 3;
  Scheme scheme = Scheme::Mub;
  Evolution evolution = Evolution::Stationary;
  NoiseConfig noise{.signal_rate = 1e6, .dark_rate = 100.0, .background_rate = 50.0};
  MegConfig meg;
  int t_tot = 300;
  int n_states = 50;
  int n_noise_repeats = 20;
  std::uint64_t master_seed = 0;
  double threshold = 0.1;
  // Burn-in for the mean-infidelity statistic. -1 selects each trace's own
  // iterations-to-threshold crossing, separating convergence from steady state.
  int burn_in = -1;

  void validate() const;
};

struct RunFailure {
  int state_index;
  int repeat_index;
  std::string message;
};

// Successful traces in (state, repeat) order; failed runs are reported with
// context instead of aborting the rest of the ensemble.
struct EnsembleResult {
  std::vector<TrackTrace> traces;
  std::vector<RunFailure> failures;
};

// Runs n_states x n_noise_repeats independent tracks. Every run draws from its
// own seed stream derived from (master_seed, state, repeat), so the output is
// identical for any jobs count.
EnsembleResult run_ensemble(const ScenarioConfig& cfg, int jobs = 1);

// First iteration t >= 1 with infidelity below the threshold; nullopt if the
// trace never crosses it.
std::optional<int> iterations_to_threshold(const TrackTrace& trace, double threshold);

// Arithmetic mean of the infidelity over iterations t > burn_in.
double mean_infidelity(const TrackTrace& trace, int burn_in);

struct QuartileStat {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

// Quantile by linear interpolation between order statistics: with the sorted
// sample v_0..v_{n-1}, the q-quantile sits at position h = q(n-1).
double quantile(std::vector<double> values, double q);
QuartileStat quartiles(const std::vector<double>& values);

struct AggregateStats {
  // Pointwise over traces, indexed by iteration (row 0 included).
  std::vector<QuartileStat> infidelity;
  // Over the traces that reached the threshold; censored counts the rest.
  QuartileStat iterations_to_thresh;
  int censored = 0;
  // Headline statistic: burn-in mean (steady-state error) plus the whole-trace
  // variant for comparison.
  QuartileStat mean_infidelity_burn_in;
  QuartileStat mean_infidelity_full;
  QuartileStat final_purity;
  double threshold = 0.1;
  int n_traces = 0;
};

AggregateStats aggregate(const std::vector<TrackTrace>& traces, double threshold, int burn_in);

struct SweepPoint {
  double level = 0.0;
  double snr = 0.0;
  AggregateStats stats;
  std::vector<RunFailure> failures;
};

// Re-runs the base scenario with extra_background_rate set to each level.
std::vector<SweepPoint> noise_sweep(const ScenarioConfig& base, const std::vector<double>& levels,
                                    int jobs = 1);

}  // namespace megtomo
