#pragma once

#include "megtomo/hermitian.hpp"
#include "megtomo/rng.hpp"

namespace megtomo {

inline constexpr double kNormTol = 1e-12;

/// Unit-norm complex d-vector.
class PureState {
 public:
  explicit PureState(CVector amplitudes);
  static PureState basis_state(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& vector() const { return amps_; }
  Complex amplitude(int i) const { return amps_(i); }

  /// |<other|this>|^2
  double overlap(const PureState& other) const;

 private:
  CVector amps_;
};

/// Deterministic unitary drift applied to the prepared state: at iteration t
/// the state is exp(-i * generator * rate * t) |psi0>.
struct EvolutionSpec {
  HermitianMatrix generator;
  double rate = 0.0;  // radians per iteration
  int total_iterations = 0;

  EvolutionSpec(HermitianMatrix gen, double rate_, int total);

  /// rate = 1.3 / total, chosen so the state drifts out to a fidelity
  /// minimum against |psi0> and comes back within the run.
  static EvolutionSpec with_default_rate(HermitianMatrix gen, int total);
};

/// Caches the generator's eigendecomposition so per-iteration evolution is a
/// couple of matrix-vector products.
class UnitaryEvolver {
 public:
  explicit UnitaryEvolver(const EvolutionSpec& spec);

  /// exp(-i sigma omega t)|psi0>. t = 0 returns psi0 unchanged.
  PureState state_at(const PureState& psi0, int t) const;

  int total_iterations() const { return total_; }

 private:
  Eigen::VectorXd values_;
  Matrix vectors_;
  double rate_;
  int total_;
};

/// Haar-distributed pure state: 2d independent standard normals as real and
/// imaginary parts, then normalized.
PureState haar_random_pure(int dim, Rng& rng);

/// GUE draw (A + A^dagger)/2 rescaled to unit spectral norm.
HermitianMatrix random_hermitian(int dim, Rng& rng);

PureState evolve(const PureState& psi0, const EvolutionSpec& spec, int t);

/// (1/sqrt(d)) diag(1, ..., 1, -(d-1)); traceless for every d.
HermitianMatrix pauli_z_general(int dim);

DensityMatrix density_of(const PureState& psi);

}  // namespace megtomo
