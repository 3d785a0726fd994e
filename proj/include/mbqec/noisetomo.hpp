#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mbqec/statevec.hpp"

namespace mbqec {

/// Dense mixed state. Construction checks hermiticity, unit trace and
/// positivity (eigenvalues >= -1e-10, i.e. physical after the tomography
/// projection step).
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, Eigen::MatrixXcd matrix);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  static constexpr double kPhysTol = 1e-10;

 private:
  int num_qubits_;
  Eigen::MatrixXcd matrix_;
};

DensityMatrix to_density(const StateVector& state);

/// p * rho + (1 - p) * I / 2^n
DensityMatrix mix_white_noise(const DensityMatrix& rho, double p);

/// Mixing weight p that makes the white-noise state reach fidelity F
/// against the pure state it was built from: F = p + (1 - p) / 2^n.
double white_noise_weight_for_fidelity(double fidelity, int num_qubits);

/// <psi| rho |psi>
double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi);

/// (Tr rho X, Tr rho Y, Tr rho Z) of a single-qubit state.
std::array<double, 3> bloch_vector(const DensityMatrix& rho);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// ---------------------------------------------------------------------------
// Wave plates

enum class WavePlateKind { hwp, qwp };

/// Jones matrix of a wave plate with its fast axis at `angle_deg`:
///   HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
///   QWP(t) = R(t) diag(1, -i) R(-t)
/// Phase conventions are fixed so that HWP(45) equals X exactly and
/// QWP(-45) equals exp(-i pi/4 X) up to a global phase.
Eigen::Matrix2cd waveplate(WavePlateKind kind, double angle_deg);

// ---------------------------------------------------------------------------
// Counts and tomography

/// One row of a measurement record: a per-qubit basis label such as "XZYX",
/// an outcome bit string of the same length, and how often it occurred.
struct CountEntry {
  std::string setting;
  std::string outcome;
  std::uint64_t count;
};

using CountTable = std::vector<CountEntry>;

/// Multinomial sampling of measurement counts, one row per outcome for each
/// setting (zero-count outcomes are kept).
CountTable simulate_counts(const DensityMatrix& rho,
                           const std::vector<std::string>& settings,
                           std::uint64_t shots_per_setting,
                           std::mt19937_64& rng);

/// Linear-inversion reconstruction from Pauli expectation estimates,
/// followed by projection to the physical set (eigenvalue clipping to >= 0,
/// then trace renormalization). Requires the full 3^n setting grid with
/// nonzero totals.
DensityMatrix reconstruct(const CountTable& counts, int num_qubits);

struct EstimateWithError {
  double mean;
  double std;
};

/// Poissonian resampling: each count is redrawn from Poisson(count), the
/// estimator is re-run, and the sample mean / standard deviation over
/// `cycles` repetitions is reported. Zero counts resample to zero.
EstimateWithError monte_carlo_error(
    const CountTable& counts,
    const std::function<double(const CountTable&)>& estimator,
    int cycles, std::mt19937_64& rng);

/// Same resampling loop for a vector-valued estimator; all components share
/// each cycle's resampled table.
std::vector<EstimateWithError> monte_carlo_error_multi(
    const CountTable& counts,
    const std::function<std::vector<double>(const CountTable&)>& estimator,
    int cycles, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Pure-state decompositions

/// Eigendecomposition of a mixed state into pure components, for running
/// pure-state pipelines against a noisy resource by sampling.
class PureStateEnsemble {
 public:
  explicit PureStateEnsemble(const StateVector& pure);
  explicit PureStateEnsemble(const DensityMatrix& rho,
                             double weight_cutoff = 1e-12);

  const StateVector& sample(std::mt19937_64& rng) const;
  std::size_t size() const { return components_.size(); }
  const StateVector& component(std::size_t i) const { return components_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  std::vector<StateVector> components_;
  std::vector<double> weights_;      // normalized
  std::vector<double> cumulative_;
};

}  // namespace mbqec
