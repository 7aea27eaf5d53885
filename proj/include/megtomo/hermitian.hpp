#pragma once

#include <complex>

#include <Eigen/Dense>

namespace megtomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Shared tolerances. Type invariants are stated against these values.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-12;
inline constexpr double kBasisTol = 1e-10;
inline constexpr double kDefaultLogFloor = 1e-12;

/// max_ij |m(i,j) - conj(m(j,i))|
double hermiticity_defect(const Matrix& m);

/// (m + m^dagger)/2; exactly Hermitian entrywise.
Matrix symmetrized(const Matrix& m);

/// d x d complex matrix, Hermitian within kHermitianTol, d >= 2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m);
  static HermitianMatrix zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

/// Hermitian, unit-trace (within kTraceTol), positive semidefinite
/// (min eigenvalue >= -kPsdTol). The estimator's state and all benchmark
/// targets live here.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  static DensityMatrix maximally_mixed(int dim);

  /// Skips validation. Only for call sites where the invariants hold by
  /// construction (e.g. a renormalized positive spectral decomposition).
  static DensityMatrix unchecked(Matrix m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, Matrix m) : mat_(std::move(m)) {}

  Matrix mat_;
};

/// Eigenvalues ascending; column k of vectors pairs with values(k).
struct EigenSystem {
  Eigen::VectorXd values;
  Matrix vectors;
};

EigenSystem eig_hermitian(const HermitianMatrix& h);

/// V diag(e^lambda) V^dagger. Throws std::overflow_error if any e^lambda
/// overflows; callers that may hit this must shift the spectrum first.
HermitianMatrix exp_hermitian(const HermitianMatrix& h);

/// Matrix log with eigenvalues clamped below at `floor` (> 0) before the
/// elementwise log, so rank-deficient states stay finite.
HermitianMatrix log_psd(const DensityMatrix& rho, double floor = kDefaultLogFloor);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) omega sqrt(rho)))^2, clipped to [0,1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& omega);

/// tr(rho^2), in [1/d, 1].
double purity(const DensityMatrix& rho);

}  // namespace megtomo
