#include "megtomo/estimator.hpp"

#include <cmath>
#include <numeric>

namespace megtomo {

void MegConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("MegConfig: learning_rate must be positive");
  }
  if (eta_decay < 0.0) {
    throw std::invalid_argument("MegConfig: eta_decay must be >= 0");
  }
  if (!(log_floor > 0.0)) {
    throw std::invalid_argument("MegConfig: log_floor must be positive");
  }
  if (dim < 2) {
    throw std::invalid_argument("MegConfig: dim must be >= 2");
  }
}

namespace {

void check_terms(const DensityMatrix& rho, std::span<const PureState> states,
                 std::span<const double> y) {
  if (states.size() != y.size() || states.empty()) {
    throw std::invalid_argument("loss/gradient: states and y must have equal nonzero length");
  }
  for (const auto& s : states) {
    if (s.dim() != rho.dim()) {
      throw std::invalid_argument("loss/gradient: dimension mismatch");
    }
  }
}

double predicted_probability(const DensityMatrix& rho, const PureState& s) {
  // tr(rho |s><s|) = <s| rho |s>
  return (s.vector().adjoint() * rho.matrix() * s.vector())(0).real();
}

}  // namespace

double loss(const DensityMatrix& rho, std::span<const PureState> states,
            std::span<const double> y) {
  check_terms(rho, states, y);
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double r = predicted_probability(rho, states[i]) - y[i];
    total += r * r;
  }
  return total;
}

HermitianMatrix gradient(const DensityMatrix& rho, std::span<const PureState> states,
                         std::span<const double> y) {
  check_terms(rho, states, y);
  const int d = rho.dim();
  Matrix g = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double r = predicted_probability(rho, states[i]) - y[i];
    g += (2.0 * r) * (states[i].vector() * states[i].vector().adjoint());
  }
  return HermitianMatrix(symmetrized(g));
}

namespace {

void check_probability_vector(std::span<const double> y) {
  const double sum = std::accumulate(y.begin(), y.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("loss/gradient: y must sum to 1 within 1e-9");
  }
}

}  // namespace

double loss(const DensityMatrix& rho, const MeasurementBasis& basis, std::span<const double> y) {
  check_probability_vector(y);
  return loss(rho, std::span<const PureState>(basis.states()), y);
}

HermitianMatrix gradient(const DensityMatrix& rho, const MeasurementBasis& basis,
                         std::span<const double> y) {
  check_probability_vector(y);
  return gradient(rho, std::span<const PureState>(basis.states()), y);
}

EstimatorState meg_step(const EstimatorState& state, const MeasurementBasis& basis,
                        std::span<const double> y, const MegConfig& cfg) {
  cfg.validate();
  if (basis.dim() != cfg.dim || state.estimate.dim() != cfg.dim) {
    throw std::invalid_argument("meg_step: dimension mismatch");
  }
  const int next_iteration = state.iteration + 1;
  const double eta = cfg.learning_rate_at(state.iteration);
  const HermitianMatrix grad = gradient(state.estimate, basis, y);
  const Matrix exponent =
      log_psd(state.estimate, cfg.log_floor).matrix() - eta * grad.matrix();

  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(exponent));
  if (es.info() != Eigen::Success) {
    throw EstimatorError(next_iteration, "eigendecomposition of the update exponent failed");
  }
  // spectral shift: exp(G - c I)/tr(exp(G - c I)) = exp(G)/tr(exp(G))
  const double shift = es.eigenvalues().maxCoeff();
  Eigen::VectorXd w = (es.eigenvalues().array() - shift).exp();
  const double norm = w.sum();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw EstimatorError(next_iteration, "update normalization is not finite");
  }
  w /= norm;
  Matrix rho = symmetrized(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint());
  // spectrum w is a normalized softmax: positive, sums to one
  return EstimatorState{DensityMatrix::unchecked(std::move(rho)), next_iteration};
}

PureState pure_projection(const DensityMatrix& rho) {
  auto es = eig_hermitian(HermitianMatrix(rho.matrix()));
  const int d = rho.dim();
  const double top = es.values(d - 1);

  auto first_nonzero = [&](int col) {
    for (int i = 0; i < d; ++i) {
      if (std::abs(es.vectors(i, col)) > 1e-12) return i;
    }
    return d;
  };

  int best = d - 1;
  int best_first = first_nonzero(best);
  for (int col = d - 2; col >= 0 && es.values(col) == top; --col) {
    const int f = first_nonzero(col);
    if (f < best_first) {
      best = col;
      best_first = f;
    }
  }

  CVector v = es.vectors.col(best);
  if (best_first < d) {
    const Complex a = v(best_first);
    v *= std::conj(a) / std::abs(a);
  }
  v /= v.norm();
  return PureState(std::move(v));
}

namespace {

std::vector<double> computational_probabilities(const PureState& psi) {
  std::vector<double> p(psi.dim());
  for (int i = 0; i < psi.dim(); ++i) {
    p[i] = std::norm(psi.amplitude(i));
  }
  return p;
}

}  // namespace

TrackTrace track(const PureState& psi0, const EvolutionSpec& evo, const MeasurementFamily& fam,
                 const NoiseConfig& noise, const MegConfig& cfg, Rng& rng) {
  cfg.validate();
  noise.validate();
  const int d = cfg.dim;
  if (psi0.dim() != d || evo.generator.dim() != d || fam.bases.empty() ||
      fam.bases[0].dim() != d) {
    throw std::invalid_argument("track: inconsistent dimensions");
  }

  const UnitaryEvolver evolver(evo);
  EstimatorState state = EstimatorState::initial(d);

  TrackTrace trace;
  trace.dim = d;
  trace.seed = rng.seed();
  trace.records.reserve(evo.total_iterations + 1);

  {
    IterationRecord r0;
    r0.iteration = 0;
    r0.basis_label = "init";
    // fidelity against a pure target reduces to <psi|rho|psi>
    r0.infidelity =
        1.0 - (psi0.vector().adjoint() * state.estimate.matrix() * psi0.vector())(0).real();
    r0.purity = purity(state.estimate);
    r0.p_true = computational_probabilities(psi0);
    r0.p_pred.resize(d);
    for (int i = 0; i < d; ++i) {
      r0.p_pred[i] = state.estimate.matrix()(i, i).real();
    }
    trace.records.push_back(std::move(r0));
  }

  for (int t = 1; t <= evo.total_iterations; ++t) {
    const PureState psi_t = evolver.state_at(psi0, t);
    const int basis_index = static_cast<int>(rng.uniform_index(fam.bases.size()));
    const MeasurementBasis& basis = fam.bases[basis_index];
    CountRecord counts = measure_iteration(psi_t, basis, noise, rng);

    state = meg_step(state, basis, counts.probabilities, cfg);
    const PureState phi_t = pure_projection(state.estimate);

    IterationRecord rec;
    rec.iteration = t;
    rec.basis_index = basis_index;
    rec.basis_label = basis.label();
    rec.counts = std::move(counts.counts);
    rec.degenerate_counts = counts.degenerate;
    // both states are pure, so the fidelity is the squared overlap
    rec.infidelity = 1.0 - phi_t.overlap(psi_t);
    rec.purity = purity(state.estimate);
    rec.p_true = computational_probabilities(psi_t);
    rec.p_pred = computational_probabilities(phi_t);
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace megtomo
