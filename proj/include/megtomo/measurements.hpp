#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "megtomo/states.hpp"

namespace megtomo {

enum class Scheme { Mub, GeneralizedPauli };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// One complete projective setting: d orthonormal states whose rank-1
/// projectors resolve the identity.
class MeasurementBasis {
 public:
  MeasurementBasis(std::vector<PureState> states, std::string label);

  int dim() const { return states_.empty() ? 0 : states_[0].dim(); }
  int size() const { return static_cast<int>(states_.size()); }
  const PureState& state(int i) const { return states_.at(i); }
  const std::vector<PureState>& states() const { return states_; }
  const Matrix& projector(int i) const { return projectors_.at(i); }
  const std::string& label() const { return label_; }

 private:
  std::vector<PureState> states_;
  std::vector<Matrix> projectors_;
  std::string label_;
};

/// The full measurement design: d+1 bases for MUB (prime d only), d^2-1
/// operator eigenbases for the generalized Pauli scheme.
struct MeasurementFamily {
  Scheme scheme;
  std::vector<MeasurementBasis> bases;
};

bool is_prime(int n);

/// Computational basis plus d Fourier-type bases (Wootters-Fields form for
/// odd primes; Z/X/Y eigenbases for d = 2). Throws for non-prime d and points
/// at the GeneralizedPauli fallback.
MeasurementFamily mub_family(int dim);

/// The d^2-1 traceless operators {u_jk, v_jk, w_l} normalized so
/// tr(A_a A_b) = 2 delta_ab. Reduce to the Pauli matrices at d = 2 and the
/// Gell-Mann matrices at d = 3. Order: for k = 1..d-1: u_0k, v_0k, ...,
/// u_(k-1)k, v_(k-1)k, w_k -- the conventional Pauli/Gell-Mann numbering.
std::vector<HermitianMatrix> generalized_pauli_operators(int dim);

/// Complete orthonormal eigenbasis, ordered by ascending eigenvalue with ties
/// broken by ascending computational index. Degenerate zero eigenspaces of
/// the off-diagonal operators keep the computational-basis vectors verbatim.
MeasurementBasis eigenbasis_of(const HermitianMatrix& op);
MeasurementBasis eigenbasis_of(const HermitianMatrix& op, const std::string& label);

MeasurementFamily generalized_pauli_family(int dim);

MeasurementFamily make_family(Scheme scheme, int dim);

/// True iff the projectors of all bases span the full d^2-dimensional real
/// space of Hermitian matrices.
bool is_informationally_complete(const MeasurementFamily& fam);

nlohmann::json family_to_json(const MeasurementFamily& fam);
MeasurementFamily family_from_json(const nlohmann::json& j);

}  // namespace megtomo
