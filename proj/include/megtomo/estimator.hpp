#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "megtomo/photon_sim.hpp"

namespace megtomo {

struct MegConfig {
  double learning_rate = 5.0;
  double eta_decay = 0.0;  // eta_t = learning_rate / (1 + eta_decay * t); 0 keeps it constant
  double log_floor = kDefaultLogFloor;
  int dim = 3;

  double learning_rate_at(int t) const {
    return learning_rate / (1.0 + eta_decay * static_cast<double>(t));
  }
  void validate() const;
};

/// The running estimate rho_hat and how many updates produced it.
struct EstimatorState {
  DensityMatrix estimate;
  int iteration = 0;

  static EstimatorState initial(int dim) {
    return EstimatorState{DensityMatrix::maximally_mixed(dim), 0};
  }
};

/// Raised when an update step fails numerically; carries the iteration index.
class EstimatorError : public std::runtime_error {
 public:
  EstimatorError(int iteration, const std::string& what)
      : std::runtime_error("estimator step " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Quadratic multi-outcome loss sum_i (tr(rho X_i) - y_i)^2 over the given
/// projectors. The span overloads accept any number of terms (the
/// single-term case is the original one-measurement loss).
double loss(const DensityMatrix& rho, std::span<const PureState> states,
            std::span<const double> y);
HermitianMatrix gradient(const DensityMatrix& rho, std::span<const PureState> states,
                         std::span<const double> y);

/// Basis-level loss/gradient; y must be a probability vector (sums to 1
/// within 1e-9).
double loss(const DensityMatrix& rho, const MeasurementBasis& basis, std::span<const double> y);
HermitianMatrix gradient(const DensityMatrix& rho, const MeasurementBasis& basis,
                         std::span<const double> y);

/// One matrix-exponentiated-gradient update:
///   rho_{t+1} = exp(G) / tr(exp(G)),  G = log(rho_t) - eta_t * grad L_t.
/// G is shifted by -lambda_max(G) I before exponentiating; the shift cancels
/// in the normalization but keeps exp() in range at large eta * |grad|.
EstimatorState meg_step(const EstimatorState& state, const MeasurementBasis& basis,
                        std::span<const double> y, const MegConfig& cfg);

/// Eigenvector of the largest eigenvalue, with the first nonzero amplitude
/// rotated real positive. Eigenvalue ties resolve to the candidate whose
/// first nonzero amplitude has the smallest computational index.
PureState pure_projection(const DensityMatrix& rho);

/// One row of a tracking run. Row 0 describes the initial guess itself
/// (basis_index -1, predicted probabilities from the mixed estimate's
/// diagonal); rows t >= 1 benchmark the pure projection of the updated
/// estimate against the true evolved state.
struct IterationRecord {
  int iteration = 0;
  int basis_index = -1;
  std::string basis_label;
  std::vector<std::int64_t> counts;
  bool degenerate_counts = false;
  double infidelity = 0.0;
  double purity = 0.0;
  std::vector<double> p_true;
  std::vector<double> p_pred;
};

struct TrackTrace {
  int dim = 0;
  std::uint64_t seed = 0;
  int state_index = -1;   // set by the benchmark harness
  int repeat_index = -1;  // set by the benchmark harness
  std::vector<IterationRecord> records;  // records[t] has iteration == t
};

/// Full online run over evo.total_iterations: evolve the true state, draw a
/// basis uniformly at random, simulate one CountRecord, update the estimate,
/// and record the benchmark quantities.
TrackTrace track(const PureState& psi0, const EvolutionSpec& evo, const MeasurementFamily& fam,
                 const NoiseConfig& noise, const MegConfig& cfg, Rng& rng);

}  // namespace megtomo
