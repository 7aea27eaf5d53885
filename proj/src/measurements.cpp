#include "megtomo/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace megtomo {

std::string scheme_name(Scheme s) {
  return s == Scheme::Mub ? "mub" : "pauli";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "mub") return Scheme::Mub;
  if (name == "pauli") return Scheme::GeneralizedPauli;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected 'mub' or 'pauli')");
}

MeasurementBasis::MeasurementBasis(std::vector<PureState> states, std::string label)
    : states_(std::move(states)), label_(std::move(label)) {
  if (states_.empty()) {
    throw std::invalid_argument("MeasurementBasis: no states");
  }
  const int d = states_[0].dim();
  if (static_cast<int>(states_.size()) != d) {
    throw std::invalid_argument("MeasurementBasis: need exactly d states for a d-dim basis");
  }
  Matrix sum = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (states_[i].dim() != d) {
      throw std::invalid_argument("MeasurementBasis: mixed dimensions");
    }
    for (int j = 0; j < i; ++j) {
      if (std::abs(states_[i].vector().dot(states_[j].vector())) > kBasisTol) {
        throw std::invalid_argument("MeasurementBasis: states are not orthogonal");
      }
    }
    projectors_.push_back(states_[i].vector() * states_[i].vector().adjoint());
    sum += projectors_.back();
  }
  if ((sum - Matrix::Identity(d, d)).norm() > kBasisTol) {
    throw std::invalid_argument("MeasurementBasis: projectors do not resolve the identity");
  }
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

MeasurementFamily mub_family(int dim) {
  if (!is_prime(dim)) {
    throw std::invalid_argument(
        "mub_family: complete MUB sets are only constructed for prime dim; "
        "use the GeneralizedPauli scheme for dim " + std::to_string(dim));
  }
  std::vector<MeasurementBasis> bases;
  {
    std::vector<PureState> comp;
    for (int i = 0; i < dim; ++i) {
      comp.push_back(PureState::basis_state(dim, i));
    }
    bases.emplace_back(std::move(comp), "mub:0");
  }
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dim));
  if (dim == 2) {
    // the quadratic-phase formula below only works for odd primes
    std::vector<PureState> x_basis, y_basis;
    x_basis.emplace_back(CVector{{inv_sqrt_d, inv_sqrt_d}});
    x_basis.emplace_back(CVector{{inv_sqrt_d, -inv_sqrt_d}});
    y_basis.emplace_back(CVector{{Complex(inv_sqrt_d, 0), Complex(0, inv_sqrt_d)}});
    y_basis.emplace_back(CVector{{Complex(inv_sqrt_d, 0), Complex(0, -inv_sqrt_d)}});
    bases.emplace_back(std::move(x_basis), "mub:1");
    bases.emplace_back(std::move(y_basis), "mub:2");
  } else {
    // basis b, vector j, component k: omega^(b k^2 + j k) / sqrt(d)
    for (int b = 0; b < dim; ++b) {
      std::vector<PureState> states;
      for (int j = 0; j < dim; ++j) {
        CVector v(dim);
        for (int k = 0; k < dim; ++k) {
          const int e = (b * k * k + j * k) % dim;
          v(k) = std::polar(inv_sqrt_d, 2.0 * M_PI * e / dim);
        }
        states.emplace_back(std::move(v));
      }
      bases.emplace_back(std::move(states), "mub:" + std::to_string(b + 1));
    }
  }
  return MeasurementFamily{Scheme::Mub, std::move(bases)};
}

std::vector<HermitianMatrix> generalized_pauli_operators(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("generalized_pauli_operators: dim must be >= 2");
  }
  std::vector<HermitianMatrix> ops;
  ops.reserve(dim * dim - 1);
  for (int k = 1; k < dim; ++k) {
    for (int j = 0; j < k; ++j) {
      Matrix u = Matrix::Zero(dim, dim);
      u(j, k) = 1.0;
      u(k, j) = 1.0;
      ops.emplace_back(std::move(u));
      Matrix v = Matrix::Zero(dim, dim);
      v(j, k) = Complex(0, -1);
      v(k, j) = Complex(0, 1);
      ops.emplace_back(std::move(v));
    }
    Matrix w = Matrix::Zero(dim, dim);
    const double scale = std::sqrt(2.0 / (static_cast<double>(k) * (k + 1)));
    for (int j = 0; j < k; ++j) {
      w(j, j) = scale;
    }
    w(k, k) = -scale * static_cast<double>(k);
    ops.emplace_back(std::move(w));
  }
  return ops;
}

namespace {

MeasurementBasis diagonal_eigenbasis(const Matrix& m, const std::string& label) {
  const int d = static_cast<int>(m.rows());
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return m(a, a).real() < m(b, b).real();
  });
  std::vector<PureState> states;
  for (int i : order) {
    states.push_back(PureState::basis_state(d, i));
  }
  return MeasurementBasis(std::move(states), label);
}

}  // namespace

MeasurementBasis eigenbasis_of(const HermitianMatrix& op, const std::string& label) {
  const Matrix& m = op.matrix();
  const int d = op.dim();
  const double off_tol = 1e-12;

  double max_off = 0.0;
  int bj = -1, bk = -1;
  int off_count = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const double a = std::abs(m(j, k));
      if (a > off_tol) {
        ++off_count;
        if (a > max_off) {
          max_off = a;
          bj = j;
          bk = k;
        }
      }
    }
  }

  if (off_count == 0) {
    return diagonal_eigenbasis(m, label);
  }

  if (off_count == 1 && m.diagonal().cwiseAbs().maxCoeff() <= off_tol) {
    // single 2x2 block with zero diagonal: eigenvalues -s, 0 (d-2 fold), +s
    const Complex z = m(bk, bj) / std::abs(m(bk, bj));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CVector minus = CVector::Zero(d), plus = CVector::Zero(d);
    minus(bj) = inv_sqrt2;
    minus(bk) = -z * inv_sqrt2;
    plus(bj) = inv_sqrt2;
    plus(bk) = z * inv_sqrt2;
    std::vector<PureState> states;
    states.emplace_back(std::move(minus));
    for (int i = 0; i < d; ++i) {
      if (i != bj && i != bk) {
        states.push_back(PureState::basis_state(d, i));
      }
    }
    states.emplace_back(std::move(plus));
    return MeasurementBasis(std::move(states), label);
  }

  // not one of the generated operators; generic path
  auto es = eig_hermitian(op);
  std::vector<PureState> states;
  for (int i = 0; i < d; ++i) {
    CVector v = es.vectors.col(i);
    states.emplace_back(v / v.norm());
  }
  return MeasurementBasis(std::move(states), label);
}

MeasurementBasis eigenbasis_of(const HermitianMatrix& op) {
  return eigenbasis_of(op, "eigenbasis");
}

MeasurementFamily generalized_pauli_family(int dim) {
  auto ops = generalized_pauli_operators(dim);
  std::vector<MeasurementBasis> bases;
  bases.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    bases.push_back(eigenbasis_of(ops[i], "pauli:" + std::to_string(i)));
  }
  return MeasurementFamily{Scheme::GeneralizedPauli, std::move(bases)};
}

MeasurementFamily make_family(Scheme scheme, int dim) {
  return scheme == Scheme::Mub ? mub_family(dim) : generalized_pauli_family(dim);
}

bool is_informationally_complete(const MeasurementFamily& fam) {
  if (fam.bases.empty()) return false;
  const int d = fam.bases[0].dim();
  int rows = 0;
  for (const auto& b : fam.bases) rows += b.size();
  // real vectorization: diagonal, then re/im of the upper triangle
  Eigen::MatrixXd a(rows, d * d);
  int r = 0;
  for (const auto& b : fam.bases) {
    for (int i = 0; i < b.size(); ++i) {
      const Matrix& p = b.projector(i);
      int c = 0;
      for (int j = 0; j < d; ++j) a(r, c++) = p(j, j).real();
      for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
          a(r, c++) = p(j, k).real();
          a(r, c++) = p(j, k).imag();
        }
      }
      ++r;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-8);
  return qr.rank() == d * d;
}

nlohmann::json family_to_json(const MeasurementFamily& fam) {
  nlohmann::json j;
  j["scheme"] = scheme_name(fam.scheme);
  j["dim"] = fam.bases.empty() ? 0 : fam.bases[0].dim();
  j["bases"] = nlohmann::json::array();
  for (const auto& b : fam.bases) {
    nlohmann::json jb;
    jb["label"] = b.label();
    jb["states"] = nlohmann::json::array();
    for (int i = 0; i < b.size(); ++i) {
      nlohmann::json js = nlohmann::json::array();
      for (int k = 0; k < b.dim(); ++k) {
        const Complex c = b.state(i).amplitude(k);
        js.push_back({c.real(), c.imag()});
      }
      jb["states"].push_back(std::move(js));
    }
    j["bases"].push_back(std::move(jb));
  }
  return j;
}

MeasurementFamily family_from_json(const nlohmann::json& j) {
  MeasurementFamily fam;
  fam.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  for (const auto& jb : j.at("bases")) {
    std::vector<PureState> states;
    for (const auto& js : jb.at("states")) {
      CVector v(js.size());
      for (std::size_t k = 0; k < js.size(); ++k) {
        v(k) = Complex(js[k][0].get<double>(), js[k][1].get<double>());
      }
      states.emplace_back(std::move(v));
    }
    fam.bases.emplace_back(std::move(states), jb.at("label").get<std::string>());
  }
  return fam;
}

}  // namespace megtomo
