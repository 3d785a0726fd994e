#include <doctest.h>

#include <cmath>
#include <random>

#include "mbqec/cluster.hpp"
#include "mbqec/code.hpp"
#include "mbqec/gates.hpp"
#include "mbqec/noisetomo.hpp"
#include "mbqec/rng.hpp"
#include "oracles.hpp"

using namespace mbqec;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Counts proportional to the exact outcome probabilities, scaled large
// enough that integer rounding sits far below the 1e-12 tolerances.
CountTable exact_counts(const DensityMatrix& rho,
                        const std::vector<std::string>& settings) {
  const double scale = 9.0e15;
  std::mt19937_64 unused(0);
  CountTable shaped = simulate_counts(rho, settings, 1, unused);
  const int n = rho.num_qubits();
  const Eigen::Index dim = rho.dim();
  std::size_t row = 0;
  for (const std::string& setting : settings) {
    for (Eigen::Index o = 0; o < dim; ++o, ++row) {
      // projector onto the outcome of this setting
      Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
      for (int q = 0; q < n; ++q) {
        const int bit = (o >> (n - 1 - q)) & 1;
        Eigen::Vector2cd e;
        switch (setting[q]) {
          case 'X': e = bit ? oracle::ket_minus() : oracle::ket_plus(); break;
          case 'Y':
            e = bit ? Eigen::Vector2cd(1.0 / std::sqrt(2.0),
                                       Complex(0, -1.0 / std::sqrt(2.0)))
                    : Eigen::Vector2cd(1.0 / std::sqrt(2.0),
                                       Complex(0, 1.0 / std::sqrt(2.0)));
            break;
          default: e = bit ? oracle::ket1() : oracle::ket0(); break;
        }
        v = oracle::kron_vec(v, Eigen::VectorXcd(e));
      }
      const double p = (v.adjoint() * rho.matrix() * v)(0, 0).real();
      shaped[row].count =
          static_cast<std::uint64_t>(std::llround(std::max(p, 0.0) * scale));
    }
  }
  return shaped;
}

std::vector<std::string> one_qubit_settings() { return {"X", "Y", "Z"}; }

std::vector<std::string> settings_for(int n) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto& prefix : out) {
      for (char c : {'X', 'Y', 'Z'}) next.push_back(prefix + c);
    }
    out = std::move(next);
  }
  return out;
}
}  // namespace

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1, Complex(0, 1), Complex(0, 1), 0;  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(1, bad), std::invalid_argument);

  Eigen::MatrixXcd wrong_trace = 2 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(1, wrong_trace), std::invalid_argument);

  Eigen::MatrixXcd negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix(1, negative), std::invalid_argument);
}

TEST_CASE("to_density") {
  const DensityMatrix zero = to_density(StateVector::basis_state(1, 0));
  CHECK(std::abs(zero.matrix()(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(zero.matrix()(1, 1)) < 1e-15);

  const StateVector plus = apply_single(StateVector::basis_state(1, 0), 1,
                                        gates::hadamard());
  const DensityMatrix rho_plus = to_density(plus);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(rho_plus.matrix()(i, j) - Complex(0.5, 0)) < 1e-15);
    }
  }

  std::mt19937_64 rng(4);
  const DensityMatrix pure =
      to_density(StateVector(3, oracle::random_state(3, rng)));
  CHECK((pure.matrix() * pure.matrix()).trace().real() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("white noise mixing") {
  const DensityMatrix box = to_density(box_cluster());
  const DensityMatrix same = mix_white_noise(box, 1.0);
  CHECK((same.matrix() - box.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix mixed = mix_white_noise(box, 0.0);
  CHECK((mixed.matrix() - Eigen::MatrixXcd::Identity(16, 16) / 16.0)
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  CHECK_THROWS_AS(mix_white_noise(box, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(mix_white_noise(box, -0.1), std::invalid_argument);

  // fidelity is linear in the mixing weight
  const StateVector target = box_cluster();
  const double f0 = fidelity_mixed(mix_white_noise(box, 0.0), target);
  const double f1 = fidelity_mixed(mix_white_noise(box, 1.0), target);
  for (double p : {0.25, 0.5, 0.8}) {
    CHECK(fidelity_mixed(mix_white_noise(box, p), target) ==
          doctest::Approx(p * f1 + (1 - p) * f0).epsilon(1e-12));
  }
}

TEST_CASE("noise weight solves the target fidelity") {
  const double p = white_noise_weight_for_fidelity(0.656, 4);
  CHECK(p == doctest::Approx(0.63306666666).epsilon(1e-9));
  const DensityMatrix rho = mix_white_noise(to_density(box_cluster()), p);
  CHECK(std::abs(fidelity_mixed(rho, box_cluster()) - 0.656) <= 1e-9);
  CHECK_THROWS_AS(white_noise_weight_for_fidelity(0.01, 4),
                  std::invalid_argument);
}

TEST_CASE("wave plates") {
  CHECK((waveplate(WavePlateKind::hwp, 45) - gates::pauli_x())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((waveplate(WavePlateKind::hwp, 0) - gates::pauli_z())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const Eigen::Matrix2cd expected =
      std::cos(kPi / 4) * gates::identity() -
      Complex(0, 1) * std::sin(kPi / 4) * gates::pauli_x();
  CHECK(gates::equal_up_to_phase(waveplate(WavePlateKind::qwp, -45), expected));
  CHECK(gates::is_unitary(waveplate(WavePlateKind::qwp, 17.3)));
  CHECK(gates::is_unitary(waveplate(WavePlateKind::hwp, -28.0)));

  // the physically implemented plates equal the frame-mapped phase errors
  CHECK(gates::equal_up_to_phase(
      map_error_box_to_lab(3, gates::phase_rotation(kPi / 2)).lab_unitary,
      waveplate(WavePlateKind::hwp, 45)));
  CHECK(gates::equal_up_to_phase(
      map_error_box_to_lab(3, gates::phase_rotation(kPi / 4)).lab_unitary,
      waveplate(WavePlateKind::qwp, -45)));
}

TEST_CASE("simulate_counts") {
  std::mt19937_64 rng(21);
  const DensityMatrix zero = to_density(StateVector::basis_state(1, 0));
  const CountTable certain = simulate_counts(zero, {"Z"}, 1000, rng);
  REQUIRE(certain.size() == 2);
  CHECK(certain[0].outcome == "0");
  CHECK(certain[0].count == 1000);
  CHECK(certain[1].count == 0);

  const StateVector plus = apply_single(StateVector::basis_state(1, 0), 1,
                                        gates::hadamard());
  const CountTable halves = simulate_counts(to_density(plus), {"Z"}, 40000, rng);
  CHECK(halves[0].count + halves[1].count == 40000);
  CHECK(std::abs(static_cast<double>(halves[0].count) / 40000 - 0.5) < 0.0125);

  CHECK_THROWS_AS(simulate_counts(zero, {"Q"}, 10, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_counts(zero, {"ZZ"}, 10, rng),
                  std::invalid_argument);
}

TEST_CASE("reconstruct from exact counts is exact") {
  // single-qubit catalog states
  for (const auto& input : catalog_states()) {
    const DensityMatrix truth = to_density(input.ket());
    const DensityMatrix rec =
        reconstruct(exact_counts(truth, one_qubit_settings()), 1);
    CHECK((rec.matrix() - truth.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // the 4-qubit resource
  const DensityMatrix box = to_density(box_cluster());
  const DensityMatrix rec4 = reconstruct(exact_counts(box, settings_for(4)), 4);
  CHECK((rec4.matrix() - box.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  // and the projection leaves exact physical inputs untouched (idempotence)
  const DensityMatrix mixed = mix_white_noise(box, 0.6331);
  const DensityMatrix rec_mixed =
      reconstruct(exact_counts(mixed, settings_for(4)), 4);
  CHECK(trace_distance(rec_mixed, mixed) <= 1e-12);
}

TEST_CASE("reconstruct recovers Bloch vectors") {
  const LogicalInput plus_i(1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0)));
  const DensityMatrix rec = reconstruct(
      exact_counts(to_density(plus_i.ket()), one_qubit_settings()), 1);
  const auto bloch = bloch_vector(rec);
  CHECK(bloch[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bloch[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bloch[2] == doctest::Approx(0.0).epsilon(1e-12));

  const LogicalInput minus_i = *find_catalog_state("-i");
  const DensityMatrix rec2 = reconstruct(
      exact_counts(to_density(minus_i.ket()), one_qubit_settings()), 1);
  CHECK(bloch_vector(rec2)[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct input validation") {
  std::mt19937_64 rng(2);
  const DensityMatrix zero = to_density(StateVector::basis_state(1, 0));
  CountTable missing = simulate_counts(zero, {"X", "Y"}, 100, rng);
  CHECK_THROWS_WITH_AS(reconstruct(missing, 1),
                       doctest::Contains("missing"), std::invalid_argument);

  CountTable zeroed = simulate_counts(zero, one_qubit_settings(), 100, rng);
  for (auto& entry : zeroed) {
    if (entry.setting == "Y") entry.count = 0;
  }
  CHECK_THROWS_WITH_AS(reconstruct(zeroed, 1),
                       doctest::Contains("zero counts"),
                       std::invalid_argument);
}

TEST_CASE("sampled roundtrip stays close and physical") {
  std::mt19937_64 rng(31);
  const DensityMatrix truth = to_density(find_catalog_state("M")->ket());
  const CountTable counts =
      simulate_counts(truth, one_qubit_settings(), 100000, rng);
  const DensityMatrix rec = reconstruct(counts, 1);
  CHECK(trace_distance(rec, truth) <= 0.02);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rec.matrix());
  CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
  CHECK(rec.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixed fidelity agrees with pure fidelity on pure states") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = StateVector(2, oracle::random_state(2, rng));
    const StateVector b = StateVector(2, oracle::random_state(2, rng));
    CHECK(fidelity_mixed(to_density(a), b) ==
          doctest::Approx(fidelity_pure(a, b)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(
      fidelity_mixed(to_density(StateVector::basis_state(2, 0)),
                     StateVector::basis_state(1, 0)),
      std::invalid_argument);
}

TEST_CASE("bloch_vector") {
  const auto z = bloch_vector(to_density(StateVector::basis_state(1, 0)));
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.0));

  const auto m = bloch_vector(to_density(find_catalog_state("M")->ket()));
  CHECK(m[0] == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(-std::sin(kPi / 4)).epsilon(1e-12));
  CHECK(m[2] == doctest::Approx(0.0).epsilon(1e-12));

  const DensityMatrix maximally_mixed(
      1, 0.5 * Eigen::MatrixXcd::Identity(2, 2));
  const auto zero = bloch_vector(maximally_mixed);
  CHECK(std::abs(zero[0]) + std::abs(zero[1]) + std::abs(zero[2]) < 1e-12);

  CHECK_THROWS_AS(bloch_vector(to_density(StateVector::basis_state(2, 0))),
                  std::invalid_argument);
}

TEST_CASE("monte_carlo_error basics") {
  std::mt19937_64 rng(17);
  CountTable counts{{"Z", "0", 100}, {"Z", "1", 9900}};

  const EstimateWithError constant = monte_carlo_error(
      counts, [](const CountTable&) { return 3.5; }, 100, rng);
  CHECK(constant.mean == doctest::Approx(3.5));
  CHECK(constant.std == doctest::Approx(0.0));

  // frequency estimator: std ~ sqrt(N)/T for N << T
  auto freq = [](const CountTable& t) {
    const double total = static_cast<double>(t[0].count + t[1].count);
    return static_cast<double>(t[0].count) / total;
  };
  const EstimateWithError f = monte_carlo_error(counts, freq, 4000, rng);
  const double predicted = std::sqrt(100.0) / 10000.0;
  CHECK(std::abs(f.std - predicted) / predicted < 0.3);

  CHECK_THROWS_AS(monte_carlo_error(counts, freq, 1, rng),
                  std::invalid_argument);

  // estimator failures carry the cycle index
  auto broken = [](const CountTable&) -> double {
    throw std::runtime_error("boom");
  };
  CHECK_THROWS_WITH_AS(monte_carlo_error(counts, broken, 10, rng),
                       doctest::Contains("cycle"), std::runtime_error);
}

TEST_CASE("monte carlo keeps zero counts at zero") {
  std::mt19937_64 rng(23);
  CountTable counts{{"Z", "0", 0}, {"Z", "1", 500}};
  auto zero_count = [](const CountTable& t) {
    return static_cast<double>(t[0].count);
  };
  const EstimateWithError e = monte_carlo_error(counts, zero_count, 50, rng);
  CHECK(e.mean == doctest::Approx(0.0));
  CHECK(e.std == doctest::Approx(0.0));
}

TEST_CASE("pure state ensembles") {
  const PureStateEnsemble trivial(box_cluster());
  CHECK(trivial.size() == 1);
  std::mt19937_64 rng(1);
  CHECK(&trivial.sample(rng) == &trivial.component(0));

  const double p = 0.6331;
  const PureStateEnsemble mixed(mix_white_noise(to_density(box_cluster()), p));
  CHECK(mixed.size() == 16);
  double total = 0.0;
  double max_weight = 0.0;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    total += mixed.weight(i);
    max_weight = std::max(max_weight, mixed.weight(i));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // the dominant component is the resource state itself
  CHECK(max_weight == doctest::Approx(p + (1 - p) / 16).epsilon(1e-9));

  int dominant = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const StateVector& s = mixed.sample(rng);
    if (fidelity_pure(s, box_cluster()) > 0.999) ++dominant;
  }
  const double freq = dominant / static_cast<double>(draws);
  CHECK(std::abs(freq - (p + (1 - p) / 16)) < 0.02);
}

TEST_CASE("trace distance") {
  const DensityMatrix zero = to_density(StateVector::basis_state(1, 0));
  const DensityMatrix one = to_density(StateVector::basis_state(1, 1));
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
}
