#include "mbqec/noisetomo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "mbqec/gates.hpp"

namespace mbqec {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

const Eigen::Matrix2cd& single_pauli(char label) {
  static const Eigen::Matrix2cd i = gates::identity();
  static const Eigen::Matrix2cd x = gates::pauli_x();
  static const Eigen::Matrix2cd y = gates::pauli_y();
  static const Eigen::Matrix2cd z = gates::pauli_z();
  switch (label) {
    case 'I': return i;
    case 'X': return x;
    case 'Y': return y;
    case 'Z': return z;
  }
  throw std::invalid_argument(std::string("bad Pauli label '") + label + "'");
}

Eigen::MatrixXcd pauli_string(const std::string& labels) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : labels) out = kron(out, single_pauli(c));
  return out;
}

// Columns are the +1/-1 eigenvectors of the labeled Pauli.
Eigen::Matrix2cd basis_columns(char label) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (label) {
    case 'X':
      m << s, s, s, -s;
      return m;
    case 'Y':
      m << s, s, Complex(0, s), Complex(0, -s);
      return m;
    case 'Z':
      return Eigen::Matrix2cd::Identity();
  }
  throw std::invalid_argument(std::string("bad basis label '") + label + "'");
}

void check_setting(const std::string& setting, int num_qubits) {
  if (static_cast<int>(setting.size()) != num_qubits) {
    throw std::invalid_argument("setting '" + setting + "' does not have " +
                                std::to_string(num_qubits) + " labels");
  }
  for (char c : setting) {
    if (c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument("setting '" + setting +
                                  "' contains a label outside {X,Y,Z}");
    }
  }
}

}  // namespace

DensityMatrix::DensityMatrix(int num_qubits, Eigen::MatrixXcd matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index dim = Eigen::Index(1) << num_qubits_;
  if (num_qubits_ < 1 || matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("density matrix must be 2^n x 2^n");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kPhysTol) {
    throw std::invalid_argument("density matrix must be Hermitian");
  }
  if (std::abs(matrix_.trace().real() - 1.0) > kPhysTol ||
      std::abs(matrix_.trace().imag()) > kPhysTol) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_,
                                                         Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kPhysTol) {
    throw std::invalid_argument("density matrix must be positive semidefinite");
  }
}

DensityMatrix to_density(const StateVector& state) {
  const Eigen::VectorXcd& v = state.amplitudes();
  return DensityMatrix(state.num_qubits(), v * v.adjoint());
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("mixing weight must lie in [0, 1]");
  }
  const Eigen::Index dim = rho.dim();
  Eigen::MatrixXcd mixed =
      p * rho.matrix() +
      (1.0 - p) / static_cast<double>(dim) *
          Eigen::MatrixXcd::Identity(dim, dim);
  return DensityMatrix(rho.num_qubits(), std::move(mixed));
}

double white_noise_weight_for_fidelity(double fidelity, int num_qubits) {
  const double floor = 1.0 / static_cast<double>(Eigen::Index(1) << num_qubits);
  if (!(fidelity >= floor && fidelity <= 1.0)) {
    throw std::invalid_argument("target fidelity must lie in [1/2^n, 1]");
  }
  return (fidelity - floor) / (1.0 - floor);
}

double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.num_qubits() != psi.num_qubits()) {
    throw std::invalid_argument("fidelity of mismatched dimensions");
  }
  const Eigen::VectorXcd& v = psi.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

std::array<double, 3> bloch_vector(const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("Bloch vector is defined for one qubit");
  }
  const Eigen::MatrixXcd& m = rho.matrix();
  return {(m * gates::pauli_x()).trace().real(),
          (m * gates::pauli_y()).trace().real(),
          (m * gates::pauli_z()).trace().real()};
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("trace distance of mismatched dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Eigen::Matrix2cd waveplate(WavePlateKind kind, double angle_deg) {
  if (!std::isfinite(angle_deg)) {
    throw std::invalid_argument("wave plate angle must be finite");
  }
  const double t = angle_deg * kPi / 180.0;
  if (kind == WavePlateKind::hwp) {
    const double c = std::cos(2 * t), s = std::sin(2 * t);
    Eigen::Matrix2cd m;
    m << c, s, s, -c;
    return m;
  }
  Eigen::Matrix2cd rot;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Eigen::Matrix2cd retard = Eigen::Matrix2cd::Zero();
  retard(0, 0) = 1.0;
  retard(1, 1) = Complex(0, -1);
  return rot * retard * rot.transpose();
}

CountTable simulate_counts(const DensityMatrix& rho,
                           const std::vector<std::string>& settings,
                           std::uint64_t shots_per_setting,
                           std::mt19937_64& rng) {
  if (shots_per_setting < 1) {
    throw std::invalid_argument("need at least one shot per setting");
  }
  const int n = rho.num_qubits();
  const Eigen::Index dim = rho.dim();
  CountTable table;
  table.reserve(settings.size() * static_cast<std::size_t>(dim));
  for (const std::string& setting : settings) {
    check_setting(setting, n);
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(1, 1);
    for (char c : setting) basis = kron(basis, basis_columns(c));
    const Eigen::VectorXd probs =
        (basis.adjoint() * rho.matrix() * basis).diagonal().real().cwiseMax(0.0);

    // Multinomial draw via sequential binomials.
    std::vector<std::uint64_t> counts(dim, 0);
    std::uint64_t remaining = shots_per_setting;
    double mass_left = 1.0;
    for (Eigen::Index o = 0; o < dim && remaining > 0; ++o) {
      if (o == dim - 1) {
        counts[o] = remaining;
        remaining = 0;
        break;
      }
      const double q = std::clamp(probs(o) / std::max(mass_left, 1e-300), 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      const std::uint64_t c = q >= 1.0 ? remaining : (q <= 0.0 ? 0 : binom(rng));
      counts[o] = c;
      remaining -= c;
      mass_left -= probs(o);
    }
    for (Eigen::Index o = 0; o < dim; ++o) {
      std::string bits(n, '0');
      for (int q = 0; q < n; ++q) {
        if (o & (Eigen::Index(1) << (n - 1 - q))) bits[q] = '1';
      }
      table.push_back(CountEntry{setting, bits, counts[o]});
    }
  }
  return table;
}

namespace {

struct SettingCounts {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> outcomes;  // (bits, count)
  std::uint64_t total = 0;
};

std::map<std::string, SettingCounts> group_counts(const CountTable& counts,
                                                  int num_qubits) {
  std::map<std::string, SettingCounts> grouped;
  for (const CountEntry& entry : counts) {
    check_setting(entry.setting, num_qubits);
    if (static_cast<int>(entry.outcome.size()) != num_qubits) {
      throw std::invalid_argument("outcome '" + entry.outcome +
                                  "' does not have one bit per qubit");
    }
    std::uint64_t bits = 0;
    for (char c : entry.outcome) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("outcome '" + entry.outcome +
                                    "' contains a non-bit character");
      }
      bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
    }
    SettingCounts& sc = grouped[entry.setting];
    sc.outcomes.emplace_back(bits, entry.count);
    sc.total += entry.count;
  }
  return grouped;
}

std::vector<std::string> all_settings(int num_qubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < num_qubits; ++q) {
    std::vector<std::string> next;
    next.reserve(out.size() * 3);
    for (const std::string& prefix : out) {
      for (char c : {'X', 'Y', 'Z'}) next.push_back(prefix + c);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

DensityMatrix reconstruct(const CountTable& counts, int num_qubits) {
  const auto grouped = group_counts(counts, num_qubits);
  for (const std::string& setting : all_settings(num_qubits)) {
    auto it = grouped.find(setting);
    if (it == grouped.end()) {
      throw std::invalid_argument("incomplete settings: missing '" + setting +
                                  "'");
    }
    if (it->second.total == 0) {
      throw std::invalid_argument("setting '" + setting + "' has zero counts");
    }
  }

  const Eigen::Index dim = Eigen::Index(1) << num_qubits;
  Eigen::MatrixXcd estimate = Eigen::MatrixXcd::Identity(dim, dim);

  // One expectation estimate per non-identity Pauli string, pooling every
  // setting that matches the string on its support.
  const Eigen::Index num_strings = Eigen::Index(1) << (2 * num_qubits);
  for (Eigen::Index code = 1; code < num_strings; ++code) {
    std::string labels(num_qubits, 'I');
    Eigen::Index rest = code;
    for (int q = num_qubits - 1; q >= 0; --q) {
      labels[q] = "IXYZ"[rest & 3];
      rest >>= 2;
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& [setting, sc] : grouped) {
      bool match = true;
      for (int q = 0; q < num_qubits; ++q) {
        if (labels[q] != 'I' && labels[q] != setting[q]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      std::uint64_t support_mask = 0;
      for (int q = 0; q < num_qubits; ++q) {
        if (labels[q] != 'I') {
          support_mask |= std::uint64_t(1) << (num_qubits - 1 - q);
        }
      }
      for (const auto& [bits, count] : sc.outcomes) {
        const int parity = std::popcount(bits & support_mask) & 1;
        numerator += parity ? -static_cast<double>(count)
                            : static_cast<double>(count);
      }
      denominator += static_cast<double>(sc.total);
    }
    estimate += (numerator / denominator) * pauli_string(labels);
  }
  estimate /= static_cast<double>(dim);

  // Physicality projection: clip negative eigenvalues, renormalize.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (estimate + estimate.adjoint()));
  Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
  const double total = lambda.sum();
  if (!(total > 0.0)) {
    throw std::runtime_error("reconstruction produced an all-zero spectrum");
  }
  lambda /= total;
  Eigen::MatrixXcd projected = solver.eigenvectors() *
                               lambda.asDiagonal().toDenseMatrix().cast<Complex>() *
                               solver.eigenvectors().adjoint();
  return DensityMatrix(num_qubits, 0.5 * (projected + projected.adjoint()));
}

std::vector<EstimateWithError> monte_carlo_error_multi(
    const CountTable& counts,
    const std::function<std::vector<double>(const CountTable&)>& estimator,
    int cycles, std::mt19937_64& rng) {
  if (cycles < 2) {
    throw std::invalid_argument("Monte Carlo needs at least two cycles");
  }
  std::vector<std::vector<double>> samples;
  samples.reserve(cycles);
  CountTable resampled = counts;
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const std::uint64_t c = counts[i].count;
      if (c == 0) {
        resampled[i].count = 0;
      } else {
        std::poisson_distribution<std::uint64_t> poisson(
            static_cast<double>(c));
        resampled[i].count = poisson(rng);
      }
    }
    try {
      samples.push_back(estimator(resampled));
    } catch (const std::exception& e) {
      throw std::runtime_error("estimator failed in Monte Carlo cycle " +
                               std::to_string(cycle) + ": " + e.what());
    }
  }
  const std::size_t width = samples.front().size();
  std::vector<EstimateWithError> out(width);
  for (std::size_t k = 0; k < width; ++k) {
    double mean = 0.0;
    for (const auto& s : samples) mean += s[k];
    mean /= cycles;
    double var = 0.0;
    for (const auto& s : samples) var += (s[k] - mean) * (s[k] - mean);
    out[k] = EstimateWithError{mean, std::sqrt(var / (cycles - 1))};
  }
  return out;
}

EstimateWithError monte_carlo_error(
    const CountTable& counts,
    const std::function<double(const CountTable&)>& estimator, int cycles,
    std::mt19937_64& rng) {
  auto wrapped = [&estimator](const CountTable& t) {
    return std::vector<double>{estimator(t)};
  };
  return monte_carlo_error_multi(counts, wrapped, cycles, rng).front();
}

PureStateEnsemble::PureStateEnsemble(const StateVector& pure)
    : components_{pure}, weights_{1.0}, cumulative_{1.0} {}

PureStateEnsemble::PureStateEnsemble(const DensityMatrix& rho,
                                     double weight_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  double total = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double w = solver.eigenvalues()(k);
    if (w <= weight_cutoff) continue;
    weights_.push_back(w);
    components_.emplace_back(rho.num_qubits(),
                             solver.eigenvectors().col(k).eval());
    total += w;
  }
  if (components_.empty()) {
    throw std::invalid_argument("density matrix has no usable pure component");
  }
  double acc = 0.0;
  for (double& w : weights_) {
    w /= total;
    acc += w;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

const StateVector& PureStateEnsemble::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx = std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative_.begin()),
      components_.size() - 1);
  return components_[idx];
}

}  // namespace mbqec
