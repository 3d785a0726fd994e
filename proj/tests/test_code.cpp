#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mbqec/cluster.hpp"
#include "mbqec/code.hpp"
#include "mbqec/gates.hpp"
#include "mbqec/rng.hpp"
#include "oracles.hpp"

using namespace mbqec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector ideal_encoded(const LogicalInput& input) {
  return StateVector(
      3, oracle::encoded_state(input.alpha(), input.beta(), false));
}
}  // namespace

TEST_CASE("catalog: the nine named inputs") {
  const auto& catalog = catalog_states();
  REQUIRE(catalog.size() == 9);

  const std::map<std::string, std::pair<double, double>> angles = {
      {"0", {0, 0}},    {"+", {90, 0}},  {"-i", {90, -90}},
      {"T", {45, 90}},  {"U", {45, -90}}, {"Q", {45, 0}},
      {"N", {45, 180}}, {"P", {90, 45}}, {"M", {90, -45}}};
  for (const auto& entry : catalog) {
    CHECK(std::abs(std::norm(entry.alpha()) + std::norm(entry.beta()) - 1.0) <
          1e-12);
    const auto& [theta, phi] = angles.at(entry.name());
    CHECK(entry.theta_deg() == doctest::Approx(theta).epsilon(1e-9));
    CHECK(entry.phi_deg() == doctest::Approx(phi).epsilon(1e-9));
  }

  const LogicalInput zero = *find_catalog_state("0");
  CHECK(zero.alpha() == Complex(1, 0));
  CHECK(zero.beta() == Complex(0, 0));

  // |M> = (|0> + e^{-i pi/4}|1>)/sqrt(2)
  const LogicalInput m = *find_catalog_state("M");
  CHECK(std::abs(m.alpha() - kInvSqrt2) < 1e-12);
  CHECK(std::abs(m.beta() - std::polar(kInvSqrt2, -kPi / 4)) < 1e-12);

  CHECK_FALSE(find_catalog_state("bogus").has_value());
}

TEST_CASE("angle round trips") {
  for (const auto& entry : catalog_states()) {
    const LogicalInput back =
        LogicalInput::from_angles(entry.theta_deg(), entry.phi_deg());
    CHECK(fidelity_pure(back.ket(), entry.ket()) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("encoding basis") {
  const MeasurementBasis zero_basis = encoding_basis(*find_catalog_state("0"));
  CHECK((zero_basis.m0() - Eigen::Vector2cd(1, 0)).norm() < 1e-15);
  CHECK((zero_basis.m1() - Eigen::Vector2cd(0, -1)).norm() < 1e-15);

  const MeasurementBasis plus_basis = encoding_basis(*find_catalog_state("+"));
  CHECK((plus_basis.m0() - Eigen::Vector2cd(kInvSqrt2, kInvSqrt2)).norm() <
        1e-15);
  CHECK((plus_basis.m1() - Eigen::Vector2cd(kInvSqrt2, -kInvSqrt2)).norm() <
        1e-15);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd v = oracle::random_state(1, rng);
    const MeasurementBasis basis =
        encoding_basis(LogicalInput(v(0), v(1)));
    CHECK(std::abs(basis.m0().dot(basis.m1())) < 1e-12);
  }
}

TEST_CASE("branch correction matches the brute-force oracle") {
  auto check_against_oracle = [](const LogicalInput& input) {
    const auto pair_hits =
        oracle::correction_hits(input.alpha(), input.beta(), false);
    const auto pair_found = branch_correction(input, CorrectionScope::qubits23);
    CHECK(pair_found.has_value() == !pair_hits.empty());
    if (pair_found) {
      CHECK(pair_found->on_qubit4 == Pauli::i);
      CHECK(correction_restores_encoding(input, *pair_found, 1e-9));
    }
    const auto full_hits =
        oracle::correction_hits(input.alpha(), input.beta(), true);
    const auto full_found = branch_correction(input);
    CHECK(full_found.has_value() == !full_hits.empty());
    if (full_found) {
      CHECK(correction_restores_encoding(input, *full_found, 1e-9));
    }
  };
  for (const auto& entry : catalog_states()) check_against_oracle(entry);
  check_against_oracle(LogicalInput::from_angles(50, 30));
  check_against_oracle(LogicalInput::from_angles(120, -70));
}

TEST_CASE("branch correction closed forms") {
  // Real coefficients: the (XZ)_2 Z_3 pair completed by Z_4 restores the
  // encoding (XZ acts as Y up to phase). The pair alone acts on qubits 2,3
  // only and cannot fix the |-> left on qubit 4, so the pair-only search
  // reports nothing.
  for (const std::string name : {"0", "+"}) {
    const LogicalInput input = *find_catalog_state(name);
    CHECK(correction_restores_encoding(
        input, PauliCorrection{Pauli::y, Pauli::z, Pauli::z}, 1e-9));
    CHECK(branch_correction(input).has_value());
  }
  CHECK_FALSE(
      branch_correction(*find_catalog_state("+"), CorrectionScope::qubits23)
          .has_value());

  // Both Y-axis eigenstates fix up with the plain (Z, Z) pair.
  CHECK(correction_restores_encoding(
      LogicalInput(kInvSqrt2, Complex(0, kInvSqrt2)),
      PauliCorrection{Pauli::z, Pauli::z, Pauli::i}, 1e-9));
  CHECK(correction_restores_encoding(
      *find_catalog_state("-i"), PauliCorrection{Pauli::z, Pauli::z, Pauli::i},
      1e-9));

  // |P> has no pair correction; the qubit-4-assisted search still succeeds.
  const LogicalInput p = *find_catalog_state("P");
  CHECK_FALSE(branch_correction(p, CorrectionScope::qubits23).has_value());
  const auto full = branch_correction(p);
  REQUIRE(full.has_value());
  CHECK(full->on_qubit4 != Pauli::i);

  // A state away from all three great circles admits no correction at all.
  const LogicalInput generic = LogicalInput::from_angles(50, 30);
  CHECK_FALSE(branch_correction(generic).has_value());
}

TEST_CASE("encode: forced primary branch reproduces the encoded state") {
  const StateVector box = box_cluster();
  const EncodeResult enc =
      encode_forced(box, *find_catalog_state("0"), EncodingBranch::primary);
  CHECK(enc.probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(enc.branch == EncodingBranch::primary);
  CHECK_FALSE(enc.corrected);
  CHECK(oracle::fid(enc.state.amplitudes(), oracle::encoded_state(1, 0, false)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("encode: both branches carry probability one half") {
  const StateVector box = box_cluster();
  for (const auto& input : catalog_states()) {
    for (EncodingBranch branch :
         {EncodingBranch::primary, EncodingBranch::secondary}) {
      CHECK(encode_forced(box, input, branch).probability ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("encode: corrected secondary branch equals the primary branch") {
  const StateVector box = box_cluster();
  const LogicalInput plus = *find_catalog_state("+");
  const EncodeResult secondary =
      encode_forced(box, plus, EncodingBranch::secondary);
  CHECK(secondary.corrected);
  REQUIRE(secondary.correction.has_value());
  const EncodeResult primary = encode_forced(box, plus, EncodingBranch::primary);
  CHECK(fidelity_pure(secondary.state, primary.state) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // a branch with zero probability cannot be forced
  CHECK_THROWS_AS(encode_forced(StateVector::basis_state(4, 0),
                                *find_catalog_state("0"),
                                EncodingBranch::secondary),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode_forced(StateVector::basis_state(3, 0),
                                *find_catalog_state("0"),
                                EncodingBranch::primary),
                  std::invalid_argument);
}

TEST_CASE("uncorrectable secondary branch stays raw and is flagged") {
  const StateVector box = box_cluster();
  const LogicalInput generic = LogicalInput::from_angles(50, 30);
  const EncodeResult enc =
      encode_forced(box, generic, EncodingBranch::secondary);
  CHECK_FALSE(enc.corrected);
  CHECK_FALSE(enc.correction.has_value());
  const StateVector primary = ideal_encoded(generic);
  CHECK(fidelity_pure(enc.state, primary) < 1.0 - 1e-3);
}

TEST_CASE("apply_phase_error") {
  const LogicalInput zero = *find_catalog_state("0");
  const StateVector encoded = ideal_encoded(zero);

  // full phase error on qubit 3 swaps the X-basis pattern of that qubit
  const StateVector errored =
      apply_phase_error(encoded, ErrorSpec{ErrorTarget::qubit3, kPi / 2});
  const Eigen::VectorXcd expected =
      kInvSqrt2 *
      (oracle::kron_vec(
           oracle::kron_vec(Eigen::VectorXcd(oracle::ket_plus()),
                            Eigen::VectorXcd(oracle::ket_minus())),
           Eigen::VectorXcd(oracle::ket0())) +
       oracle::kron_vec(
           oracle::kron_vec(Eigen::VectorXcd(oracle::ket_minus()),
                            Eigen::VectorXcd(oracle::ket_plus())),
           Eigen::VectorXcd(oracle::ket1())));
  CHECK(oracle::fid(errored.amplitudes(), expected) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // zero angle is the identity
  const StateVector untouched =
      apply_phase_error(encoded, ErrorSpec{ErrorTarget::both, 0.0});
  CHECK((untouched.amplitudes() - encoded.amplitudes()).norm() < 1e-12);

  CHECK_THROWS_AS(
      apply_phase_error(box_cluster(), ErrorSpec{ErrorTarget::qubit2, 1.0}),
      std::invalid_argument);
}

TEST_CASE("apply_phase_error: half error builds the error/no-error superposition") {
  // written out against the explicit coherent-superposition expansion
  const LogicalInput n_state = *find_catalog_state("N");
  const Complex a = n_state.alpha();
  const Complex b = n_state.beta();
  auto term = [](const Eigen::Vector2cd& q2, const Eigen::Vector2cd& q3,
                 const Eigen::Vector2cd& q4) {
    return oracle::kron_vec(
        oracle::kron_vec(Eigen::VectorXcd(q2), Eigen::VectorXcd(q3)),
        Eigen::VectorXcd(q4));
  };
  const Complex mi(0, -1);
  const Eigen::VectorXcd expansion =
      (a / 2.0) * (term(oracle::ket_plus(), oracle::ket_plus(), oracle::ket0()) +
                   mi * term(oracle::ket_minus(), oracle::ket_plus(), oracle::ket0()) +
                   term(oracle::ket_minus(), oracle::ket_minus(), oracle::ket1()) +
                   mi * term(oracle::ket_plus(), oracle::ket_minus(), oracle::ket1())) +
      (b / 2.0) * (term(oracle::ket_minus(), oracle::ket_minus(), oracle::ket0()) +
                   mi * term(oracle::ket_plus(), oracle::ket_minus(), oracle::ket0()) +
                   term(oracle::ket_plus(), oracle::ket_plus(), oracle::ket1()) +
                   mi * term(oracle::ket_minus(), oracle::ket_plus(), oracle::ket1()));
  const StateVector errored = apply_phase_error(
      ideal_encoded(n_state), ErrorSpec{ErrorTarget::qubit2, kPi / 4});
  CHECK(oracle::fid(errored.amplitudes(), expansion) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("syndrome measurement statistics") {
  const LogicalInput zero = *find_catalog_state("0");
  const StateVector clean = ideal_encoded(zero);

  for (const Syndrome& s : Syndrome::all()) {
    if (s.uniform()) {
      CHECK(syndrome_measure_forced(clean, s).probability ==
            doctest::Approx(0.5).epsilon(1e-12));
    } else {
      CHECK_THROWS_AS(syndrome_measure_forced(clean, s),
                      std::invalid_argument);
    }
  }

  // full error on qubit 3, syndrome +-: qubit 4 already holds the input
  const StateVector errored =
      apply_phase_error(clean, ErrorSpec{ErrorTarget::qubit3, kPi / 2});
  const SyndromeResult r =
      syndrome_measure_forced(errored, Syndrome::from_label("+-"));
  CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fidelity_pure(r.qubit4_state, zero.ket()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // half error: every syndrome shows up with probability 1/4
  const StateVector half =
      apply_phase_error(ideal_encoded(*find_catalog_state("N")),
                        ErrorSpec{ErrorTarget::qubit3, kPi / 4});
  for (const Syndrome& s : Syndrome::all()) {
    CHECK(syndrome_measure_forced(half, s).probability ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("digitalization profile") {
  auto [p0, p1] = digitalization_profile(kPi / 4);
  CHECK(p0 == doctest::Approx(0.5));
  CHECK(p1 == doctest::Approx(0.5));
  CHECK(digitalization_profile(0).first == doctest::Approx(1.0));
  CHECK(digitalization_profile(0).second == doctest::Approx(0.0));
  CHECK(digitalization_profile(kPi / 2).first ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(digitalization_profile(kPi / 2).second == doctest::Approx(1.0));
}

TEST_CASE("recovery lookup table") {
  using H = ErrorHypothesis;
  CHECK(recovery_lookup(H::no_error, Syndrome::from_label("++")) ==
        RecoveryOp::identity);
  CHECK(recovery_lookup(H::no_error, Syndrome::from_label("--")) ==
        RecoveryOp::x);
  CHECK(recovery_lookup(H::z2, Syndrome::from_label("-+")) ==
        RecoveryOp::identity);
  CHECK(recovery_lookup(H::z2, Syndrome::from_label("+-")) == RecoveryOp::x);
  CHECK(recovery_lookup(H::z3, Syndrome::from_label("+-")) ==
        RecoveryOp::identity);
  CHECK(recovery_lookup(H::z3, Syndrome::from_label("-+")) == RecoveryOp::x);

  CHECK(recovery_lookup(H::unknown_location, Syndrome::from_label("++")) ==
        RecoveryOp::identity);
  CHECK(recovery_lookup(H::unknown_location, Syndrome::from_label("--")) ==
        RecoveryOp::x);
  CHECK(recovery_lookup(H::unknown_location, Syndrome::from_label("+-")) ==
        RecoveryOp::detect_only_abort);
  CHECK(recovery_lookup(H::unknown_location, Syndrome::from_label("-+")) ==
        RecoveryOp::detect_only_abort);

  CHECK_THROWS_AS(recovery_lookup(H::no_error, Syndrome::from_label("+-")),
                  SyndromeMismatchError);
  CHECK_THROWS_AS(recovery_lookup(H::z2, Syndrome::from_label("++")),
                  SyndromeMismatchError);
  CHECK_THROWS_AS(recovery_lookup(H::z3, Syndrome::from_label("--")),
                  SyndromeMismatchError);
}

TEST_CASE("decode") {
  const StateVector one = StateVector::basis_state(1, 1);
  const StateVector decoded = decode(one, RecoveryOp::x);
  CHECK(decoded.amplitude(0) == Complex(1, 0));

  std::mt19937_64 rng(19);
  const StateVector psi = StateVector(1, oracle::random_state(1, rng));
  CHECK((decode(psi, RecoveryOp::identity).amplitudes() - psi.amplitudes())
            .norm() < 1e-15);

  CHECK_THROWS_AS(decode(psi, RecoveryOp::detect_only_abort),
                  std::invalid_argument);
}

TEST_CASE("full pipeline: full phase error on qubit 3 restores the input") {
  const LogicalInput n_state = *find_catalog_state("N");
  const ErrorSpec err{ErrorTarget::qubit3, kPi / 2};
  const ProtocolOptions known{true};

  // +- needs no recovery, -+ needs X; both restore the input exactly
  for (const std::string label : {"+-", "-+"}) {
    const ProtocolRecord rec =
        run_protocol_forced(n_state, err, box_cluster(),
                            EncodingBranch::primary,
                            Syndrome::from_label(label), known);
    CHECK(rec.outcome == ProtocolOutcome::decoded);
    CHECK(rec.recovery ==
          (label == "+-" ? RecoveryOp::identity : RecoveryOp::x));
    CHECK(rec.decoded_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive ideal-protocol correctness") {
  const StateVector box = box_cluster();
  const ProtocolOptions known{true};
  struct Case {
    ErrorSpec error;
    std::vector<std::string> syndromes;
  };
  const std::vector<Case> cases = {
      {{ErrorTarget::none, 0.0}, {"++", "--"}},
      {{ErrorTarget::qubit2, kPi / 2}, {"-+", "+-"}},
      {{ErrorTarget::qubit3, kPi / 2}, {"+-", "-+"}},
      {{ErrorTarget::qubit2, kPi / 4}, {"++", "--", "-+", "+-"}},
      {{ErrorTarget::qubit3, kPi / 4}, {"++", "--", "+-", "-+"}},
  };
  for (const auto& input : catalog_states()) {
    for (const auto& c : cases) {
      for (const auto& label : c.syndromes) {
        for (EncodingBranch branch :
             {EncodingBranch::primary, EncodingBranch::secondary}) {
          const ProtocolRecord rec = run_protocol_forced(
              input, c.error, box, branch, Syndrome::from_label(label), known);
          CHECK(rec.outcome == ProtocolOutcome::decoded);
          CHECK(rec.decoded_fidelity >= 1.0 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sampled digitalization statistics stay consistent") {
  const LogicalInput input = *find_catalog_state("+");
  const ErrorSpec err{ErrorTarget::qubit3, kPi / 4};
  const ProtocolOptions known{true};
  const StateVector box = box_cluster();
  std::map<std::string, int> counts;
  const int shots = 20000;
  for (int shot = 0; shot < shots; ++shot) {
    std::mt19937_64 rng = derive_stream(99, shot);
    const ProtocolRecord rec = run_protocol(input, err, box, known, rng);
    CHECK(rec.outcome == ProtocolOutcome::decoded);
    CHECK(rec.decoded_fidelity >= 1.0 - 1e-12);
    ++counts[rec.syndrome.label()];
  }
  // each syndrome occurs with probability 1/4; allow five sigma
  const double sigma = std::sqrt(0.25 * 0.75 / shots);
  for (const Syndrome& s : Syndrome::all()) {
    const double freq = counts[s.label()] / static_cast<double>(shots);
    CHECK(std::abs(freq - 0.25) < 5 * sigma);
  }
}

TEST_CASE("double error is always flagged and can decode wrongly") {
  const ErrorSpec both{ErrorTarget::both, kPi / 2};
  const ProtocolOptions unknown{false};
  const StateVector box = box_cluster();

  const ProtocolRecord rec =
      run_protocol_forced(*find_catalog_state("0"), both, box,
                          EncodingBranch::primary, Syndrome::from_label("++"),
                          unknown);
  CHECK(rec.confusable);
  CHECK(rec.outcome == ProtocolOutcome::decoded);
  CHECK(rec.decoded_fidelity < 1e-12);  // |0> decodes to |1> here

  // mixed syndromes cannot occur for the full double error
  CHECK_THROWS_AS(
      run_protocol_forced(*find_catalog_state("0"), both, box,
                          EncodingBranch::primary, Syndrome::from_label("+-"),
                          unknown),
      std::invalid_argument);

  // a double error declared "known" still has no table entry: it runs as
  // unknown location and stays flagged
  const ProtocolOptions known{true};
  const ProtocolRecord rec2 =
      run_protocol_forced(*find_catalog_state("+"), both, box,
                          EncodingBranch::primary, Syndrome::from_label("--"),
                          known);
  CHECK(rec2.confusable);
  CHECK(rec2.hypothesis == ErrorHypothesis::unknown_location);
}

TEST_CASE("unknown location aborts on mixed syndromes") {
  const ErrorSpec err{ErrorTarget::qubit3, kPi / 2};
  const ProtocolOptions unknown{false};
  const ProtocolRecord rec = run_protocol_forced(
      *find_catalog_state("N"), err, box_cluster(), EncodingBranch::primary,
      Syndrome::from_label("+-"), unknown);
  CHECK(rec.outcome == ProtocolOutcome::detect_abort);
  CHECK(rec.recovery == RecoveryOp::detect_only_abort);
  CHECK_FALSE(rec.decoded.has_value());
}

TEST_CASE("protocol over a noisy resource ensemble") {
  const DensityMatrix noisy = mix_white_noise(to_density(box_cluster()), 0.6331);
  const PureStateEnsemble ensemble(noisy);
  CHECK(ensemble.size() == 16);

  const LogicalInput input = *find_catalog_state("0");
  const ErrorSpec none{ErrorTarget::none, 0.0};
  const ProtocolOptions known{true};
  double fid_sum = 0.0;
  int decoded = 0;
  const int shots = 4000;
  for (int shot = 0; shot < shots; ++shot) {
    std::mt19937_64 rng = derive_stream(7, shot);
    const ProtocolRecord rec = run_protocol(input, none, ensemble, known, rng);
    if (rec.outcome == ProtocolOutcome::decoded) {
      ++decoded;
      fid_sum += rec.decoded_fidelity;
    }
  }
  const double mean = fid_sum / decoded;
  CHECK(decoded > shots / 2);
  CHECK(mean < 0.999);  // noise must show
  CHECK(mean > 0.6);
}
