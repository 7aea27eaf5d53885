#include "megtomo/hermitian.hpp"

#include <cmath>
#include <stdexcept>

namespace megtomo {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> solve_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition did not converge");
  }
  return es;
}

}  // namespace

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianMatrix::HermitianMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 2) {
    throw std::invalid_argument("HermitianMatrix: need a square matrix with dim >= 2");
  }
  if (hermiticity_defect(mat_) > kHermitianTol) {
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
  }
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

DensityMatrix::DensityMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 2) {
    throw std::invalid_argument("DensityMatrix: need a square matrix with dim >= 2");
  }
  if (hermiticity_defect(mat_) > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: input is not Hermitian within tolerance");
  }
  if (std::abs(mat_.trace().real() - 1.0) > kTraceTol || std::abs(mat_.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace must be 1 within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("DensityMatrix: eigenvalue check failed to converge");
  }
  if (es.eigenvalues()(0) < -kPsdTol) {
    throw std::invalid_argument("DensityMatrix: matrix has an eigenvalue below -tolerance");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("maximally_mixed: dim must be >= 2");
  }
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::unchecked(Matrix m) {
  return DensityMatrix(Unchecked{}, std::move(m));
}

EigenSystem eig_hermitian(const HermitianMatrix& h) {
  auto es = solve_hermitian(h.matrix());
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

HermitianMatrix exp_hermitian(const HermitianMatrix& h) {
  auto es = solve_hermitian(h.matrix());
  // exp overflows past ~709.78 for doubles
  if (es.eigenvalues().maxCoeff() > 709.0) {
    throw std::overflow_error(
        "exp_hermitian: eigenvalue too large, shift the spectrum before exponentiating");
  }
  const Eigen::VectorXd w = es.eigenvalues().array().exp();
  return HermitianMatrix(
      symmetrized(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint()));
}

HermitianMatrix log_psd(const DensityMatrix& rho, double floor) {
  if (!(floor > 0.0)) {
    throw std::invalid_argument("log_psd: floor must be positive");
  }
  auto es = solve_hermitian(rho.matrix());
  const Eigen::VectorXd w = es.eigenvalues().array().max(floor).log();
  return HermitianMatrix(
      symmetrized(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint()));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& omega) {
  if (rho.dim() != omega.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  auto es = solve_hermitian(rho.matrix());
  // sqrt(rho) with tiny negative eigenvalues clipped at zero
  const Eigen::VectorXd w = es.eigenvalues().array().max(0.0).sqrt();
  const Matrix sqrt_rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix inner = symmetrized(sqrt_rho * omega.matrix() * sqrt_rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es2(inner, Eigen::EigenvaluesOnly);
  if (es2.info() != Eigen::Success) {
    throw std::runtime_error("fidelity: eigendecomposition did not converge");
  }
  const double root_sum = es2.eigenvalues().array().max(0.0).sqrt().sum();
  const double f = root_sum * root_sum;
  return std::min(1.0, std::max(0.0, f));
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) equals the squared Frobenius norm for Hermitian rho
  return rho.matrix().squaredNorm();
}

}  // namespace megtomo
