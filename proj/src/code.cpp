#include "mbqec/code.hpp"

#include <cmath>

#include "mbqec/cluster.hpp"
#include "mbqec/gates.hpp"

namespace mbqec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LogicalInput::LogicalInput(Complex alpha, Complex beta, std::string name,
                           std::string axis)
    : alpha_(alpha), beta_(beta), name_(std::move(name)),
      axis_(std::move(axis)) {
  const double n = std::sqrt(std::norm(alpha_) + std::norm(beta_));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("logical input must have nonzero finite norm");
  }
  alpha_ /= n;
  beta_ /= n;
}

double LogicalInput::theta_deg() const {
  // Fix the global phase so alpha is real and nonnegative.
  const Complex ref = std::abs(alpha_) > 1e-12 ? alpha_ / std::abs(alpha_)
                                               : beta_ / std::abs(beta_);
  const double a = (alpha_ / ref).real();
  return std::atan2(std::abs(beta_), a) * 2.0 * 180.0 / kPi;
}

double LogicalInput::phi_deg() const {
  if (std::abs(beta_) <= 1e-12) return 0.0;
  const Complex ref = std::abs(alpha_) > 1e-12 ? alpha_ / std::abs(alpha_)
                                               : beta_ / std::abs(beta_);
  double phi = std::arg(beta_ / ref) * 180.0 / kPi;
  if (phi <= -180.0 + 1e-12) phi += 360.0;  // report in (-180, 180]
  return phi;
}

StateVector LogicalInput::ket() const {
  Eigen::VectorXcd v(2);
  v << alpha_, beta_;
  return StateVector(1, std::move(v));
}

LogicalInput LogicalInput::from_angles(double theta_deg, double phi_deg,
                                       std::string name) {
  const double t = theta_deg * kPi / 180.0;
  const double p = phi_deg * kPi / 180.0;
  return LogicalInput(std::cos(t / 2.0),
                      std::polar(std::sin(t / 2.0), p), std::move(name));
}

const std::vector<LogicalInput>& catalog_states() {
  static const std::vector<LogicalInput> catalog = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0, 1);
    const Complex em = std::polar(1.0, -kPi / 4);  // e^{-i pi/4}
    const Complex ep = std::polar(1.0, kPi / 4);   // e^{+i pi/4}
    // |T>,|U> out of {|+>,|->}; |Q>,|N> out of {|+i>,|-i>}; |P>,|M> out of
    // {|0>,|1>}, each pair with relative phase e^{+-i pi/4}.
    std::vector<LogicalInput> v;
    v.emplace_back(1.0, 0.0, "0", "Z");
    v.emplace_back(s, s, "+", "X");
    v.emplace_back(s, -i * s, "-i", "-Y");
    v.emplace_back((1.0 + em) / 2.0, (1.0 - em) / 2.0, "T", "Z+Y");
    v.emplace_back((1.0 + ep) / 2.0, (1.0 - ep) / 2.0, "U", "Z-Y");
    v.emplace_back((1.0 + ep) / 2.0, i * (1.0 - ep) / 2.0, "Q", "Z+X");
    v.emplace_back((1.0 + em) / 2.0, i * (1.0 - em) / 2.0, "N", "Z-X");
    v.emplace_back(s, ep * s, "P", "X+Y");
    v.emplace_back(s, em * s, "M", "X-Y");
    return v;
  }();
  return catalog;
}

std::optional<LogicalInput> find_catalog_state(const std::string& name) {
  for (const auto& entry : catalog_states()) {
    if (entry.name() == name) return entry;
  }
  return std::nullopt;
}

MeasurementBasis encoding_basis(const LogicalInput& input) {
  const Complex a = input.alpha();
  const Complex b = input.beta();
  return MeasurementBasis(Eigen::Vector2cd(std::conj(a), std::conj(b)),
                          Eigen::Vector2cd(b, -a));
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::i: return gates::identity();
    case Pauli::x: return gates::pauli_x();
    case Pauli::y: return gates::pauli_y();
    case Pauli::z: return gates::pauli_z();
  }
  throw std::invalid_argument("bad Pauli");
}

char pauli_label(Pauli p) {
  switch (p) {
    case Pauli::i: return 'I';
    case Pauli::x: return 'X';
    case Pauli::y: return 'Y';
    case Pauli::z: return 'Z';
  }
  return '?';
}

namespace {

// Projects qubit 1 of the resource onto the requested encoding-basis
// outcome without applying any correction.
MeasurementOutcome raw_encode(const StateVector& resource,
                              const LogicalInput& input,
                              EncodingBranch branch) {
  return measure_forced(resource, 1, encoding_basis(input),
                        branch == EncodingBranch::primary ? 0 : 1);
}

StateVector apply_correction(const StateVector& encoded,
                             const PauliCorrection& c) {
  StateVector out = apply_single(encoded, 1, pauli_matrix(c.on_qubit2));
  out = apply_single(out, 2, pauli_matrix(c.on_qubit3));
  out = apply_single(out, 3, pauli_matrix(c.on_qubit4));
  return out;
}

constexpr std::array<Pauli, 4> kPauliScan = {Pauli::i, Pauli::x, Pauli::y,
                                             Pauli::z};

}  // namespace

std::optional<PauliCorrection> branch_correction(const LogicalInput& input,
                                                 CorrectionScope scope) {
  const StateVector resource = box_cluster();
  const StateVector primary = raw_encode(resource, input, EncodingBranch::primary).post_state;
  const StateVector secondary = raw_encode(resource, input, EncodingBranch::secondary).post_state;
  const double tol = 1e-10;

  auto matches = [&](const PauliCorrection& c) {
    return fidelity_pure(apply_correction(secondary, c), primary) >= 1.0 - tol;
  };

  for (Pauli p2 : kPauliScan) {
    for (Pauli p3 : kPauliScan) {
      PauliCorrection c{p2, p3, Pauli::i};
      if (matches(c)) return c;
    }
  }
  if (scope == CorrectionScope::qubits234) {
    for (Pauli p2 : kPauliScan) {
      for (Pauli p3 : kPauliScan) {
        for (Pauli p4 : {Pauli::x, Pauli::y, Pauli::z}) {
          PauliCorrection c{p2, p3, p4};
          if (matches(c)) return c;
        }
      }
    }
  }
  return std::nullopt;
}

bool correction_restores_encoding(const LogicalInput& input,
                                  const PauliCorrection& correction,
                                  double tol) {
  const StateVector resource = box_cluster();
  const StateVector primary = raw_encode(resource, input, EncodingBranch::primary).post_state;
  const StateVector secondary = raw_encode(resource, input, EncodingBranch::secondary).post_state;
  return fidelity_pure(apply_correction(secondary, correction), primary) >=
         1.0 - tol;
}

namespace {

EncodeResult finish_encode(const LogicalInput& input,
                           MeasurementOutcome&& projected) {
  const EncodingBranch branch = projected.outcome == 0
                                    ? EncodingBranch::primary
                                    : EncodingBranch::secondary;
  if (branch == EncodingBranch::primary) {
    return EncodeResult{std::move(projected.post_state), branch,
                        projected.probability, false, std::nullopt};
  }
  std::optional<PauliCorrection> correction = branch_correction(input);
  StateVector state = correction
                          ? apply_correction(projected.post_state, *correction)
                          : std::move(projected.post_state);
  return EncodeResult{std::move(state), branch, projected.probability,
                      correction.has_value(), correction};
}

void require_four_qubits(const StateVector& resource) {
  if (resource.num_qubits() != 4) {
    throw std::invalid_argument("encoding expects a 4-qubit resource state");
  }
}

}  // namespace

EncodeResult encode(const StateVector& resource, const LogicalInput& input,
                    std::mt19937_64& rng) {
  require_four_qubits(resource);
  return finish_encode(input, measure(resource, 1, encoding_basis(input), rng));
}

EncodeResult encode_forced(const StateVector& resource,
                           const LogicalInput& input, EncodingBranch branch) {
  require_four_qubits(resource);
  return finish_encode(input, raw_encode(resource, input, branch));
}

StateVector apply_phase_error(const StateVector& encoded,
                              const ErrorSpec& spec) {
  if (encoded.num_qubits() != 3) {
    throw std::invalid_argument("phase errors act on the 3-qubit encoded register");
  }
  if (!std::isfinite(spec.angle)) {
    throw std::invalid_argument("error angle must be finite");
  }
  const Eigen::Matrix2cd rot = gates::phase_rotation(spec.angle);
  StateVector out = encoded;
  // Box qubits 2 and 3 live at local indices 1 and 2.
  if (spec.target == ErrorTarget::qubit2 || spec.target == ErrorTarget::both) {
    out = apply_single(out, 1, rot);
  }
  if (spec.target == ErrorTarget::qubit3 || spec.target == ErrorTarget::both) {
    out = apply_single(out, 2, rot);
  }
  return out;
}

std::string Syndrome::label() const {
  std::string s;
  s += s2 == SyndromeBit::plus ? '+' : '-';
  s += s3 == SyndromeBit::plus ? '+' : '-';
  return s;
}

Syndrome Syndrome::from_label(const std::string& label) {
  if (label.size() != 2 || (label[0] != '+' && label[0] != '-') ||
      (label[1] != '+' && label[1] != '-')) {
    throw std::invalid_argument("syndrome label must be one of ++ +- -+ --");
  }
  return Syndrome{label[0] == '+' ? SyndromeBit::plus : SyndromeBit::minus,
                  label[1] == '+' ? SyndromeBit::plus : SyndromeBit::minus};
}

const std::array<Syndrome, 4>& Syndrome::all() {
  static const std::array<Syndrome, 4> all = {
      Syndrome{SyndromeBit::plus, SyndromeBit::plus},
      Syndrome{SyndromeBit::plus, SyndromeBit::minus},
      Syndrome{SyndromeBit::minus, SyndromeBit::plus},
      Syndrome{SyndromeBit::minus, SyndromeBit::minus}};
  return all;
}

namespace {

void require_three_qubits(const StateVector& encoded) {
  if (encoded.num_qubits() != 3) {
    throw std::invalid_argument("syndrome readout expects the 3-qubit encoded register");
  }
}

SyndromeBit bit_from_outcome(int outcome) {
  return outcome == 0 ? SyndromeBit::plus : SyndromeBit::minus;
}

}  // namespace

SyndromeResult syndrome_measure(const StateVector& encoded,
                                std::mt19937_64& rng) {
  require_three_qubits(encoded);
  const MeasurementBasis x = MeasurementBasis::x_basis();
  MeasurementOutcome m2 = measure(encoded, 1, x, rng);
  MeasurementOutcome m3 = measure(m2.post_state, 1, x, rng);
  return SyndromeResult{
      Syndrome{bit_from_outcome(m2.outcome), bit_from_outcome(m3.outcome)},
      m2.probability * m3.probability, std::move(m3.post_state)};
}

SyndromeResult syndrome_measure_forced(const StateVector& encoded,
                                       const Syndrome& syndrome) {
  require_three_qubits(encoded);
  const MeasurementBasis x = MeasurementBasis::x_basis();
  MeasurementOutcome m2 =
      measure_forced(encoded, 1, x, syndrome.s2 == SyndromeBit::plus ? 0 : 1);
  MeasurementOutcome m3 = measure_forced(
      m2.post_state, 1, x, syndrome.s3 == SyndromeBit::plus ? 0 : 1);
  return SyndromeResult{syndrome, m2.probability * m3.probability,
                        std::move(m3.post_state)};
}

std::pair<double, double> digitalization_profile(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("angle must be finite");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * c, s * s};
}

RecoveryOp recovery_lookup(ErrorHypothesis hypothesis,
                           const Syndrome& syndrome) {
  const std::string label = syndrome.label();
  switch (hypothesis) {
    case ErrorHypothesis::no_error:
      if (label == "++") return RecoveryOp::identity;
      if (label == "--") return RecoveryOp::x;
      break;
    case ErrorHypothesis::z2:
      if (label == "-+") return RecoveryOp::identity;
      if (label == "+-") return RecoveryOp::x;
      break;
    case ErrorHypothesis::z3:
      if (label == "+-") return RecoveryOp::identity;
      if (label == "-+") return RecoveryOp::x;
      break;
    case ErrorHypothesis::unknown_location:
      if (label == "++") return RecoveryOp::identity;
      if (label == "--") return RecoveryOp::x;
      return RecoveryOp::detect_only_abort;
  }
  throw SyndromeMismatchError("syndrome/hypothesis mismatch: syndrome " +
                              label + " cannot occur under the declared hypothesis");
}

StateVector decode(const StateVector& qubit4_state, RecoveryOp recovery) {
  if (qubit4_state.num_qubits() != 1) {
    throw std::invalid_argument("decode expects a single-qubit state");
  }
  switch (recovery) {
    case RecoveryOp::identity:
      return qubit4_state;
    case RecoveryOp::x:
      return apply_single(qubit4_state, 1, gates::pauli_x());
    case RecoveryOp::detect_only_abort:
      break;
  }
  throw std::invalid_argument("cannot decode a detect-only abort");
}

namespace {

// Resolves which recovery table applies to an observed syndrome. Known
// single-qubit locations use the digitalized reading: uniform syndromes mean
// the rotation was projected onto the no-error case, mixed syndromes onto
// the full phase flip at the declared location. Double errors have no table
// entry and always run as unknown location.
ErrorHypothesis resolve_hypothesis(const ErrorSpec& error,
                                   const ProtocolOptions& options,
                                   const Syndrome& syndrome) {
  if (!options.location_known || error.target == ErrorTarget::both) {
    return ErrorHypothesis::unknown_location;
  }
  switch (error.target) {
    case ErrorTarget::none:
      return ErrorHypothesis::no_error;
    case ErrorTarget::qubit2:
      return syndrome.uniform() ? ErrorHypothesis::no_error
                                : ErrorHypothesis::z2;
    case ErrorTarget::qubit3:
      return syndrome.uniform() ? ErrorHypothesis::no_error
                                : ErrorHypothesis::z3;
    default:
      return ErrorHypothesis::unknown_location;
  }
}

ProtocolRecord finish_protocol(const LogicalInput& input,
                               const ErrorSpec& error,
                               const ProtocolOptions& options,
                               EncodeResult&& enc, SyndromeResult&& syn) {
  ProtocolRecord rec{input};
  rec.branch = enc.branch;
  rec.corrected = enc.corrected;
  rec.encoding_probability = enc.probability;
  rec.error = error;
  rec.syndrome = syn.syndrome;
  rec.syndrome_probability = syn.probability;
  rec.hypothesis = resolve_hypothesis(error, options, syn.syndrome);
  rec.confusable =
      error.target == ErrorTarget::both && syn.syndrome.uniform();
  rec.qubit4_pre_recovery = syn.qubit4_state;

  try {
    rec.recovery = recovery_lookup(rec.hypothesis, syn.syndrome);
  } catch (const SyndromeMismatchError&) {
    rec.outcome = ProtocolOutcome::mismatch_abort;
    return rec;
  }
  if (rec.recovery == RecoveryOp::detect_only_abort) {
    rec.outcome = ProtocolOutcome::detect_abort;
    return rec;
  }
  rec.outcome = ProtocolOutcome::decoded;
  rec.decoded = decode(syn.qubit4_state, rec.recovery);
  rec.decoded_fidelity = fidelity_pure(*rec.decoded, input.ket());
  return rec;
}

}  // namespace

ProtocolRecord run_protocol(const LogicalInput& input, const ErrorSpec& error,
                            const StateVector& resource,
                            const ProtocolOptions& options,
                            std::mt19937_64& rng) {
  EncodeResult enc = encode(resource, input, rng);
  StateVector noisy = apply_phase_error(enc.state, error);
  SyndromeResult syn = syndrome_measure(noisy, rng);
  return finish_protocol(input, error, options, std::move(enc),
                         std::move(syn));
}

ProtocolRecord run_protocol(const LogicalInput& input, const ErrorSpec& error,
                            const PureStateEnsemble& resource,
                            const ProtocolOptions& options,
                            std::mt19937_64& rng) {
  return run_protocol(input, error, resource.sample(rng), options, rng);
}

ProtocolRecord run_protocol_forced(const LogicalInput& input,
                                   const ErrorSpec& error,
                                   const StateVector& resource,
                                   EncodingBranch branch,
                                   const Syndrome& syndrome,
                                   const ProtocolOptions& options) {
  EncodeResult enc = encode_forced(resource, input, branch);
  StateVector noisy = apply_phase_error(enc.state, error);
  SyndromeResult syn = syndrome_measure_forced(noisy, syndrome);
  return finish_protocol(input, error, options, std::move(enc),
                         std::move(syn));
}

}  // namespace mbqec
