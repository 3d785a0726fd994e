#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace mbqec::gates {

inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

/// exp(-i theta Z) = diag(e^{-i theta}, e^{i theta})
inline Eigen::Matrix2cd phase_rotation(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -theta);
  m(1, 1) = std::polar(1.0, theta);
  return m;
}

inline bool is_unitary(const Eigen::Matrix2cd& u, double tol = 1e-12) {
  return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Up-to-global-phase comparison of single-qubit operators.
inline bool equal_up_to_phase(const Eigen::Matrix2cd& a,
                              const Eigen::Matrix2cd& b, double tol = 1e-10) {
  std::complex<double> overlap = (a.adjoint() * b).trace() / 2.0;
  return std::abs(std::abs(overlap) - 1.0) <= tol &&
         (b - overlap * a).cwiseAbs().maxCoeff() <= 10 * tol;
}

}  // namespace mbqec::gates
