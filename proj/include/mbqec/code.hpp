#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mbqec/noisetomo.hpp"
#include "mbqec/statevec.hpp"

namespace mbqec {

/// A single-qubit state alpha|0> + beta|1> to be protected, normalized on
/// construction. Catalog entries keep the literal amplitude forms of the
/// nine named inputs; spherical coordinates follow the convention
/// |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> with theta the polar
/// angle from |0> and phi the azimuth from +x, reported in degrees.
class LogicalInput {
 public:
  LogicalInput(Complex alpha, Complex beta, std::string name = "",
               std::string axis = "");

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  const std::string& name() const { return name_; }
  const std::string& axis() const { return axis_; }

  double theta_deg() const;
  double phi_deg() const;
  StateVector ket() const;

  static LogicalInput from_angles(double theta_deg, double phi_deg,
                                  std::string name = "");

 private:
  Complex alpha_, beta_;
  std::string name_;  // catalog tag, empty for ad-hoc inputs
  std::string axis_;  // eigenbasis label, e.g. "Z-X"
};

/// The nine named input states: |0>, |+>, |-i>, |T>, |U>, |Q>, |N>, |P>, |M>.
const std::vector<LogicalInput>& catalog_states();
std::optional<LogicalInput> find_catalog_state(const std::string& name);

/// {alpha*|0> + beta*|1>, beta|0> - alpha|1>} — the measurement on qubit 1
/// that writes the input into qubits 2 and 3.
MeasurementBasis encoding_basis(const LogicalInput& input);

// ---------------------------------------------------------------------------
// Branch correction

enum class Pauli { i, x, y, z };

Eigen::Matrix2cd pauli_matrix(Pauli p);
char pauli_label(Pauli p);

/// Local Pauli correction applied to the encoded register after the
/// secondary projection, indexed by box qubit. A pure (2,3) pair is enough
/// only for inputs whose relative phase between alpha and beta is +-90
/// degrees; real-coefficient and equator inputs additionally need the
/// qubit-4 component.
struct PauliCorrection {
  Pauli on_qubit2 = Pauli::i;
  Pauli on_qubit3 = Pauli::i;
  Pauli on_qubit4 = Pauli::i;
};

enum class CorrectionScope {
  qubits23,   // search the 16 (P2, P3) pairs only
  qubits234,  // also allow a Pauli on qubit 4 (the default protocol scope)
};

/// Searches for a local Pauli correction mapping the secondary-branch state
/// onto the primary-branch state, up to a global phase. Scan order is
/// I < X < Y < Z per qubit, pairs before qubit-4-assisted triples, and the
/// first hit is returned; absence is a value, not an error.
std::optional<PauliCorrection> branch_correction(
    const LogicalInput& input,
    CorrectionScope scope = CorrectionScope::qubits234);

/// True iff applying `correction` to the raw secondary-branch state yields
/// the primary-branch state up to a global phase.
bool correction_restores_encoding(const LogicalInput& input,
                                  const PauliCorrection& correction,
                                  double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Encoding

enum class EncodingBranch { primary, secondary };

struct EncodeResult {
  StateVector state;  // 3 qubits, register order = box qubits (2, 3, 4)
  EncodingBranch branch;
  double probability;
  bool corrected;  // secondary branch had a correction applied
  std::optional<PauliCorrection> correction;
};

EncodeResult encode(const StateVector& resource, const LogicalInput& input,
                    std::mt19937_64& rng);
EncodeResult encode_forced(const StateVector& resource,
                           const LogicalInput& input, EncodingBranch branch);

// ---------------------------------------------------------------------------
// Errors, syndrome, recovery

enum class ErrorTarget { none, qubit2, qubit3, both };

struct ErrorSpec {
  ErrorTarget target = ErrorTarget::none;
  double angle = 0.0;  // theta of exp(-i theta Z) per affected qubit
};

/// exp(-i theta Z) on each targeted qubit of the encoded register
/// (box qubits 2, 3, 4 live at local indices 1, 2, 3).
StateVector apply_phase_error(const StateVector& encoded,
                              const ErrorSpec& spec);

enum class SyndromeBit { plus, minus };

struct Syndrome {
  SyndromeBit s2 = SyndromeBit::plus;
  SyndromeBit s3 = SyndromeBit::plus;

  bool operator==(const Syndrome&) const = default;
  bool uniform() const { return s2 == s3; }  // ++ or --
  std::string label() const;                 // "++", "+-", "-+", "--"

  static Syndrome from_label(const std::string& label);
  static const std::array<Syndrome, 4>& all();
};

struct SyndromeResult {
  Syndrome syndrome;
  double probability;       // joint Born probability
  StateVector qubit4_state;  // pre-recovery
};

SyndromeResult syndrome_measure(const StateVector& encoded,
                                std::mt19937_64& rng);
SyndromeResult syndrome_measure_forced(const StateVector& encoded,
                                       const Syndrome& syndrome);

/// (p_no_error, p_error) = (cos^2 theta, sin^2 theta): the probabilities
/// with which the syndrome readout projects a single exp(-i theta Z) onto
/// the discrete no-error / full-phase-error alternatives.
std::pair<double, double> digitalization_profile(double theta);

enum class ErrorHypothesis { no_error, z2, z3, unknown_location };

enum class RecoveryOp { identity, x, detect_only_abort };

/// Raised when a syndrome cannot occur under the declared hypothesis,
/// signaling a detected error outside of it.
class SyndromeMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The recovery table:
///   no_error:  ++ -> I, -- -> X
///   z2:        -+ -> I, +- -> X
///   z3:        +- -> I, -+ -> X
///   unknown:   ++ -> I, -- -> X, otherwise detect_only_abort
/// Any other (hypothesis, syndrome) combination throws SyndromeMismatchError.
RecoveryOp recovery_lookup(ErrorHypothesis hypothesis,
                           const Syndrome& syndrome);

/// Applies identity or X to the surviving qubit. Rejects detect_only_abort.
StateVector decode(const StateVector& qubit4_state, RecoveryOp recovery);

// ---------------------------------------------------------------------------
// Full protocol runs

struct ProtocolOptions {
  /// Whether the error location is declared known. Known single-qubit
  /// targets resolve the hypothesis per syndrome (uniform syndromes mean the
  /// digitalized no-error case); double errors always run as
  /// unknown_location since the table has no entry for them.
  bool location_known = true;
};

enum class ProtocolOutcome { decoded, detect_abort, mismatch_abort };

struct ProtocolRecord {
  LogicalInput input;
  EncodingBranch branch = EncodingBranch::primary;
  bool corrected = false;
  double encoding_probability = 0.0;
  ErrorSpec error;
  Syndrome syndrome;
  double syndrome_probability = 0.0;
  ErrorHypothesis hypothesis = ErrorHypothesis::no_error;
  RecoveryOp recovery = RecoveryOp::identity;
  ProtocolOutcome outcome = ProtocolOutcome::decoded;
  std::optional<StateVector> qubit4_pre_recovery;
  std::optional<StateVector> decoded;
  double decoded_fidelity = 0.0;  // vs the ideal input; valid iff decoded
  /// Double-error shots landing on a uniform syndrome look identical to the
  /// no-error case and decode to the wrong state; they are recorded and
  /// flagged rather than discarded.
  bool confusable = false;
};

ProtocolRecord run_protocol(const LogicalInput& input, const ErrorSpec& error,
                            const StateVector& resource,
                            const ProtocolOptions& options,
                            std::mt19937_64& rng);

/// Noisy-resource variant: samples a pure component per run.
ProtocolRecord run_protocol(const LogicalInput& input, const ErrorSpec& error,
                            const PureStateEnsemble& resource,
                            const ProtocolOptions& options,
                            std::mt19937_64& rng);

/// Walks a chosen branch and syndrome instead of sampling; used to
/// enumerate every protocol path deterministically.
ProtocolRecord run_protocol_forced(const LogicalInput& input,
                                   const ErrorSpec& error,
                                   const StateVector& resource,
                                   EncodingBranch branch,
                                   const Syndrome& syndrome,
                                   const ProtocolOptions& options);

}  // namespace mbqec
