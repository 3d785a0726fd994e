#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace mbqec {

using Complex = std::complex<double>;

/// Default tolerance for exact-math checks (orthonormality, unitarity,
/// norm preservation). The register sizes here are tiny, so double
/// precision leaves a wide margin.
inline constexpr double kDefaultTol = 1e-12;

/// Dense pure state of `num_qubits` qubits.
///
/// Qubit indices are 1-based and qubit 1 is the leftmost tensor factor,
/// i.e. the most significant bit of the amplitude index. Amplitudes are
/// normalized on construction; every operation returns a new value, so
/// states are immutable and freely shareable across threads.
class StateVector {
 public:
  StateVector(int num_qubits, Eigen::VectorXcd amplitudes);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex amplitude(Eigen::Index basis_index) const;
  double norm() const { return amplitudes_.norm(); }

  /// |bits> for a bit pattern given MSB-first, e.g. basis_state(2, 0b01) = |01>.
  static StateVector basis_state(int num_qubits, std::uint64_t bits);

 private:
  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Two orthonormal single-qubit states defining a projective measurement.
class MeasurementBasis {
 public:
  MeasurementBasis(Eigen::Vector2cd m0, Eigen::Vector2cd m1,
                   double tol = kDefaultTol);

  const Eigen::Vector2cd& m0() const { return m0_; }
  const Eigen::Vector2cd& m1() const { return m1_; }
  const Eigen::Vector2cd& state(int outcome) const;

  static MeasurementBasis z_basis();  // {|0>, |1>}
  static MeasurementBasis x_basis();  // {|+>, |->}

 private:
  Eigen::Vector2cd m0_, m1_;
};

enum class UnitaryCheck { strict, skip };

struct MeasurementOutcome {
  int outcome;          // 0 -> projected onto m0, 1 -> onto m1
  double probability;   // Born probability of the realized outcome
  StateVector post_state;  // measured qubit removed, remaining re-indexed 1..n-1
};

StateVector make_state(int num_qubits, const Eigen::VectorXcd& amplitudes);

/// Applies u on `qubit`. Rejects non-unitary u unless check == skip.
StateVector apply_single(const StateVector& state, int qubit,
                         const Eigen::Matrix2cd& u,
                         UnitaryCheck check = UnitaryCheck::strict);

StateVector apply_cz(const StateVector& state, int i, int j);
StateVector apply_swap(const StateVector& state, int i, int j);

/// Born probability of projecting `qubit` onto `projector_state`.
double outcome_probability(const StateVector& state, int qubit,
                           const Eigen::Vector2cd& projector_state);

MeasurementOutcome measure(const StateVector& state, int qubit,
                           const MeasurementBasis& basis, std::mt19937_64& rng);

/// Deterministic variant: projects onto the requested outcome. Throws if the
/// outcome has probability below `tol`.
MeasurementOutcome measure_forced(const StateVector& state, int qubit,
                                  const MeasurementBasis& basis,
                                  int forced_outcome,
                                  double tol = kDefaultTol);

/// |<a|b>|^2, global-phase invariant.
double fidelity_pure(const StateVector& a, const StateVector& b);

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol = kDefaultTol);

}  // namespace mbqec
