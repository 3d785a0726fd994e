#include "mbqec/statevec.hpp"

#include <cmath>
#include <string>

#include "mbqec/gates.hpp"

namespace mbqec {

namespace {

Eigen::Index dim_for(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 24) {
    throw std::invalid_argument("num_qubits must be in [1, 24], got " +
                                std::to_string(num_qubits));
  }
  return Eigen::Index(1) << num_qubits;
}

// Bit position (from the LSB) of 1-based `qubit` in an amplitude index.
int bit_of(int num_qubits, int qubit) {
  if (qubit < 1 || qubit > num_qubits) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) +
                                " out of range 1.." +
                                std::to_string(num_qubits));
  }
  return num_qubits - qubit;
}

}  // namespace

StateVector::StateVector(int num_qubits, Eigen::VectorXcd amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != dim_for(num_qubits)) {
    throw std::invalid_argument(
        "amplitude vector of length " + std::to_string(amplitudes_.size()) +
        " does not match 2^" + std::to_string(num_qubits));
  }
  double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("state vector must have nonzero finite norm");
  }
  amplitudes_ /= n;
}

Complex StateVector::amplitude(Eigen::Index basis_index) const {
  if (basis_index < 0 || basis_index >= dim()) {
    throw std::invalid_argument("basis index out of range");
  }
  return amplitudes_(basis_index);
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t bits) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_for(num_qubits));
  if (bits >= static_cast<std::uint64_t>(v.size())) {
    throw std::invalid_argument("basis bit pattern out of range");
  }
  v(static_cast<Eigen::Index>(bits)) = 1.0;
  return StateVector(num_qubits, std::move(v));
}

MeasurementBasis::MeasurementBasis(Eigen::Vector2cd m0, Eigen::Vector2cd m1,
                                   double tol)
    : m0_(std::move(m0)), m1_(std::move(m1)) {
  if (std::abs(m0_.norm() - 1.0) > tol || std::abs(m1_.norm() - 1.0) > tol) {
    throw std::invalid_argument("basis states must be unit norm");
  }
  if (std::abs(m0_.dot(m1_)) > tol) {
    throw std::invalid_argument("basis states must be orthogonal");
  }
}

const Eigen::Vector2cd& MeasurementBasis::state(int outcome) const {
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("outcome must be 0 or 1");
  }
  return outcome == 0 ? m0_ : m1_;
}

MeasurementBasis MeasurementBasis::z_basis() {
  return MeasurementBasis(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1));
}

MeasurementBasis MeasurementBasis::x_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return MeasurementBasis(Eigen::Vector2cd(s, s), Eigen::Vector2cd(s, -s));
}

StateVector make_state(int num_qubits, const Eigen::VectorXcd& amplitudes) {
  return StateVector(num_qubits, amplitudes);
}

StateVector apply_single(const StateVector& state, int qubit,
                         const Eigen::Matrix2cd& u, UnitaryCheck check) {
  if (check == UnitaryCheck::strict && !gates::is_unitary(u)) {
    throw std::invalid_argument("matrix is not unitary (U^dag U != I)");
  }
  const int n = state.num_qubits();
  const Eigen::Index mask = Eigen::Index(1) << bit_of(n, qubit);
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out(in.size());
  for (Eigen::Index idx = 0; idx < in.size(); ++idx) {
    if (idx & mask) continue;
    const Complex a0 = in(idx);
    const Complex a1 = in(idx | mask);
    out(idx) = u(0, 0) * a0 + u(0, 1) * a1;
    out(idx | mask) = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return StateVector(n, std::move(out));
}

StateVector apply_cz(const StateVector& state, int i, int j) {
  if (i == j) {
    throw std::invalid_argument("CZ requires two distinct qubits");
  }
  const int n = state.num_qubits();
  const Eigen::Index mi = Eigen::Index(1) << bit_of(n, i);
  const Eigen::Index mj = Eigen::Index(1) << bit_of(n, j);
  Eigen::VectorXcd out = state.amplitudes();
  for (Eigen::Index idx = 0; idx < out.size(); ++idx) {
    if ((idx & mi) && (idx & mj)) out(idx) = -out(idx);
  }
  return StateVector(n, std::move(out));
}

StateVector apply_swap(const StateVector& state, int i, int j) {
  if (i == j) {
    throw std::invalid_argument("SWAP requires two distinct qubits");
  }
  const int n = state.num_qubits();
  const Eigen::Index mi = Eigen::Index(1) << bit_of(n, i);
  const Eigen::Index mj = Eigen::Index(1) << bit_of(n, j);
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out(in.size());
  for (Eigen::Index idx = 0; idx < in.size(); ++idx) {
    const bool bi = idx & mi;
    const bool bj = idx & mj;
    out(idx) = (bi == bj) ? in(idx) : in(idx ^ (mi | mj));
  }
  return StateVector(n, std::move(out));
}

namespace {

// Unnormalized projection of `qubit` onto `proj`, with the qubit removed
// from the register. Returns (norm^2, raw amplitudes of size 2^{n-1}).
std::pair<double, Eigen::VectorXcd> project_out(const StateVector& state,
                                                int qubit,
                                                const Eigen::Vector2cd& proj) {
  const int n = state.num_qubits();
  const int bit = bit_of(n, qubit);
  const Eigen::Index mask = Eigen::Index(1) << bit;
  const Eigen::Index low = mask - 1;
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size() / 2);
  const Complex c0 = std::conj(proj(0));
  const Complex c1 = std::conj(proj(1));
  for (Eigen::Index idx = 0; idx < in.size(); ++idx) {
    const Eigen::Index reduced = ((idx >> (bit + 1)) << bit) | (idx & low);
    out(reduced) += ((idx & mask) ? c1 : c0) * in(idx);
  }
  return {out.squaredNorm(), std::move(out)};
}

}  // namespace

double outcome_probability(const StateVector& state, int qubit,
                           const Eigen::Vector2cd& projector_state) {
  if (std::abs(projector_state.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("projector state must be unit norm");
  }
  return project_out(state, qubit, projector_state).first;
}

namespace {

MeasurementOutcome realize_outcome(const StateVector& state, int qubit,
                                   const MeasurementBasis& basis, int outcome,
                                   double probability) {
  auto [p, raw] = project_out(state, qubit, basis.state(outcome));
  return MeasurementOutcome{outcome, probability,
                            StateVector(state.num_qubits() - 1, std::move(raw))};
}

}  // namespace

MeasurementOutcome measure(const StateVector& state, int qubit,
                           const MeasurementBasis& basis,
                           std::mt19937_64& rng) {
  const double p0 = project_out(state, qubit, basis.m0()).first;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int outcome = unit(rng) < p0 ? 0 : 1;
  return realize_outcome(state, qubit, basis, outcome,
                         outcome == 0 ? p0 : 1.0 - p0);
}

MeasurementOutcome measure_forced(const StateVector& state, int qubit,
                                  const MeasurementBasis& basis,
                                  int forced_outcome, double tol) {
  const double p = project_out(state, qubit, basis.state(forced_outcome)).first;
  if (p <= tol) {
    throw std::invalid_argument(
        "forced measurement outcome has probability " + std::to_string(p) +
        " below tolerance");
  }
  return realize_outcome(state, qubit, basis, forced_outcome, p);
}

double fidelity_pure(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("fidelity of states with different qubit counts");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol) {
  return fidelity_pure(a, b) >= 1.0 - tol;
}

}  // namespace mbqec
