#include "megtomo/states.hpp"

#include <cmath>
#include <stdexcept>

namespace megtomo {

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw std::invalid_argument("PureState: dim must be >= 2");
  }
  if (std::abs(amps_.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("PureState: amplitudes must be unit-norm");
  }
}

PureState PureState::basis_state(int dim, int index) {
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

double PureState::overlap(const PureState& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("overlap: dimension mismatch");
  }
  return std::norm(other.amps_.dot(amps_));
}

EvolutionSpec::EvolutionSpec(HermitianMatrix gen, double rate_, int total)
    : generator(std::move(gen)), rate(rate_), total_iterations(total) {
  if (total_iterations < 1) {
    throw std::invalid_argument("EvolutionSpec: total_iterations must be >= 1");
  }
}

EvolutionSpec EvolutionSpec::with_default_rate(HermitianMatrix gen, int total) {
  if (total < 1) {
    throw std::invalid_argument("EvolutionSpec: total_iterations must be >= 1");
  }
  return EvolutionSpec(std::move(gen), 1.3 / static_cast<double>(total), total);
}

UnitaryEvolver::UnitaryEvolver(const EvolutionSpec& spec)
    : rate_(spec.rate), total_(spec.total_iterations) {
  auto es = eig_hermitian(spec.generator);
  values_ = std::move(es.values);
  vectors_ = std::move(es.vectors);
}

PureState UnitaryEvolver::state_at(const PureState& psi0, int t) const {
  if (psi0.dim() != vectors_.rows()) {
    throw std::invalid_argument("state_at: state and generator dimensions differ");
  }
  if (t < 0 || t > total_) {
    throw std::invalid_argument("state_at: t must lie in [0, total_iterations]");
  }
  if (t == 0) {
    return psi0;
  }
  const double angle = -rate_ * static_cast<double>(t);
  CVector phases(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) {
    phases(k) = std::polar(1.0, angle * values_(k));
  }
  CVector out = vectors_ * (phases.asDiagonal() * (vectors_.adjoint() * psi0.vector()));
  out /= out.norm();
  return PureState(std::move(out));
}

PureState haar_random_pure(int dim, Rng& rng) {
  if (dim < 2) {
    throw std::invalid_argument("haar_random_pure: dim must be >= 2");
  }
  CVector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(k) = Complex(re, im);
  }
  v /= v.norm();
  return PureState(std::move(v));
}

HermitianMatrix random_hermitian(int dim, Rng& rng) {
  if (dim < 2) {
    throw std::invalid_argument("random_hermitian: dim must be >= 2");
  }
  for (;;) {
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        a(i, j) = Complex(rng.normal(), rng.normal());
      }
    }
    Matrix h = symmetrized(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const double spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    if (spectral_norm > 1e-12) {
      return HermitianMatrix(h / spectral_norm);
    }
  }
}

PureState evolve(const PureState& psi0, const EvolutionSpec& spec, int t) {
  return UnitaryEvolver(spec).state_at(psi0, t);
}

HermitianMatrix pauli_z_general(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("pauli_z_general: dim must be >= 2");
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(dim);
  diag(dim - 1) = -static_cast<double>(dim - 1);
  diag /= std::sqrt(static_cast<double>(dim));
  Matrix m = Matrix::Zero(dim, dim);
  m.diagonal() = diag.cast<Complex>();
  return HermitianMatrix(std::move(m));
}

DensityMatrix density_of(const PureState& psi) {
  // outer product of a unit vector: Hermitian entrywise, trace = |psi|^2 = 1,
  // rank one with nonnegative spectrum
  return DensityMatrix::unchecked(psi.vector() * psi.vector().adjoint());
}

}  // namespace megtomo
