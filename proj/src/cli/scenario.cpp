#include "mbqec/cli/scenario.hpp"

#include <cmath>
#include <random>

#include "mbqec/cluster.hpp"
#include "mbqec/rng.hpp"

namespace mbqec::cli {

namespace {

// Shot streams use the raw index; auxiliary draws get their own block so
// changing `shots` never reshuffles tomography randomness.
constexpr std::uint64_t kTomographyStreamBase = std::uint64_t(1) << 48;
constexpr std::uint64_t kMonteCarloStreamBase = std::uint64_t(1) << 49;

std::array<double, 3> bloch_of_pure(const StateVector& state) {
  const Complex a = state.amplitudes()(0);
  const Complex b = state.amplitudes()(1);
  const Complex cross = std::conj(a) * b;
  return {2.0 * cross.real(), 2.0 * cross.imag(),
          std::norm(a) - std::norm(b)};
}

PureStateEnsemble build_resource(const ScenarioConfig& config) {
  switch (config.resource_kind) {
    case ResourceKind::lab:
      // the protocol operates in the box frame, so the physically prepared
      // state enters through the frame map
      return PureStateEnsemble(lab_to_box(lab_cluster()));
    case ResourceKind::graph:
      return PureStateEnsemble(graph_state(GraphSpec(4, config.graph_edges)));
    default:
      break;
  }
  const StateVector box = box_cluster();
  const double p = config.resolved_noise_weight();
  if (config.resource_kind == ResourceKind::ideal || p >= 1.0) {
    return PureStateEnsemble(box);
  }
  return PureStateEnsemble(mix_white_noise(to_density(box), p));
}

struct SyndromeAccumulator {
  std::uint64_t count = 0;
  std::uint64_t decoded_count = 0;
  double fid_sum = 0.0;
  double fid_sq_sum = 0.0;
  std::array<double, 3> bloch_pre_sum{};
  std::array<double, 3> bloch_post_sum{};
  Eigen::Matrix2cd decoded_rho_sum = Eigen::Matrix2cd::Zero();
  std::optional<RecoveryOp> recovery;
};

double sample_std(double sum, double sq_sum, std::uint64_t n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var =
      (sq_sum - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return std::sqrt(std::max(var, 0.0));
}

TomographyEstimate tomography_estimate(const Eigen::Matrix2cd& rho_sum,
                                       std::uint64_t n,
                                       const StateVector& ideal,
                                       const ScenarioConfig& config,
                                       std::mt19937_64& sample_rng,
                                       std::mt19937_64& mc_rng) {
  const Eigen::Matrix2cd avg = rho_sum / static_cast<double>(n);
  const DensityMatrix rho(1, 0.5 * (avg + avg.adjoint()));
  const CountTable counts =
      simulate_counts(rho, {"X", "Y", "Z"},
                      config.tomography_shots_per_setting, sample_rng);

  auto estimate = [&ideal](const CountTable& t) {
    const DensityMatrix rec = reconstruct(t, 1);
    const auto bloch = bloch_vector(rec);
    return std::vector<double>{fidelity_mixed(rec, ideal), bloch[0], bloch[1],
                               bloch[2]};
  };
  const std::vector<double> point = estimate(counts);
  const std::vector<EstimateWithError> spread = monte_carlo_error_multi(
      counts, estimate, config.monte_carlo_cycles, mc_rng);

  TomographyEstimate out;
  out.shots_per_setting = config.tomography_shots_per_setting;
  out.cycles = config.monte_carlo_cycles;
  out.fidelity = EstimateWithError{point[0], spread[0].std};
  for (int k = 0; k < 3; ++k) {
    out.bloch[k] = EstimateWithError{point[k + 1], spread[k + 1].std};
  }
  return out;
}

}  // namespace

std::map<std::string, double> expected_syndrome_distribution(
    const PureStateEnsemble& resource, const LogicalInput& input,
    const ErrorSpec& error) {
  std::map<std::string, double> probs{{"++", 0.0}, {"+-", 0.0}, {"-+", 0.0},
                                      {"--", 0.0}};
  const MeasurementBasis x = MeasurementBasis::x_basis();
  for (std::size_t k = 0; k < resource.size(); ++k) {
    const double weight = resource.weight(k);
    for (EncodingBranch branch :
         {EncodingBranch::primary, EncodingBranch::secondary}) {
      const double p_branch = outcome_probability(
          resource.component(k), 1,
          encoding_basis(input).state(branch == EncodingBranch::primary ? 0 : 1));
      if (p_branch < 1e-15) continue;
      const EncodeResult enc =
          encode_forced(resource.component(k), input, branch);
      const StateVector noisy = apply_phase_error(enc.state, error);
      for (const Syndrome& syndrome : Syndrome::all()) {
        const double p2 = outcome_probability(
            noisy, 1, x.state(syndrome.s2 == SyndromeBit::plus ? 0 : 1));
        if (p2 < 1e-15) continue;
        const MeasurementOutcome m2 = measure_forced(
            noisy, 1, x, syndrome.s2 == SyndromeBit::plus ? 0 : 1, 0.0);
        const double p3 = outcome_probability(
            m2.post_state, 1,
            x.state(syndrome.s3 == SyndromeBit::plus ? 0 : 1));
        probs[syndrome.label()] += weight * p_branch * p2 * p3;
      }
    }
  }
  return probs;
}

RunReport run_scenario(const ScenarioConfig& config) {
  const std::uint64_t seed = config.seed ? *config.seed : std::random_device{}();

  RunReport report{config};
  report.seed = seed;
  report.shots = config.shots;
  report.config.seed = seed;  // echo the seed actually used

  const PureStateEnsemble resource = build_resource(config);
  const ProtocolOptions options{config.location_known};
  const StateVector ideal = config.input.ket();

  std::map<std::string, SyndromeAccumulator> acc;
  for (const Syndrome& s : Syndrome::all()) acc[s.label()];
  Eigen::Matrix2cd decoded_rho_sum = Eigen::Matrix2cd::Zero();
  double fid_sum = 0.0, fid_sq_sum = 0.0;

  for (std::uint64_t shot = 0; shot < config.shots; ++shot) {
    std::mt19937_64 rng = derive_stream(seed, shot);
    const ProtocolRecord rec =
        run_protocol(config.input, config.error, resource, options, rng);

    if (rec.branch == EncodingBranch::primary) {
      ++report.primary_count;
    } else {
      ++report.secondary_count;
      if (rec.corrected) ++report.secondary_corrected_count;
    }
    if (rec.confusable) ++report.confusable_count;

    SyndromeAccumulator& bucket = acc[rec.syndrome.label()];
    ++bucket.count;
    const auto pre = bloch_of_pure(*rec.qubit4_pre_recovery);
    for (int k = 0; k < 3; ++k) bucket.bloch_pre_sum[k] += pre[k];

    switch (rec.outcome) {
      case ProtocolOutcome::decoded: {
        ++report.decoded_count;
        ++bucket.decoded_count;
        bucket.recovery = rec.recovery;
        const double f = rec.decoded_fidelity;
        fid_sum += f;
        fid_sq_sum += f * f;
        bucket.fid_sum += f;
        bucket.fid_sq_sum += f * f;
        const auto post = bloch_of_pure(*rec.decoded);
        for (int k = 0; k < 3; ++k) bucket.bloch_post_sum[k] += post[k];
        const Eigen::Vector2cd d = rec.decoded->amplitudes();
        decoded_rho_sum += d * d.adjoint();
        bucket.decoded_rho_sum += d * d.adjoint();
        break;
      }
      case ProtocolOutcome::detect_abort:
        ++report.detect_abort_count;
        bucket.recovery = RecoveryOp::detect_only_abort;
        break;
      case ProtocolOutcome::mismatch_abort:
        ++report.mismatch_abort_count;
        break;
    }
  }

  const auto expected =
      expected_syndrome_distribution(resource, config.input, config.error);

  std::uint64_t tomo_stream = 0;
  for (const auto& [label, bucket] : acc) {
    SyndromeStats stats;
    stats.count = bucket.count;
    stats.frequency =
        static_cast<double>(bucket.count) / static_cast<double>(config.shots);
    stats.expected_probability = expected.at(label);
    stats.recovery = bucket.recovery;
    stats.decoded_count = bucket.decoded_count;
    if (bucket.count > 0) {
      for (int k = 0; k < 3; ++k) {
        stats.bloch_pre_recovery[k] =
            bucket.bloch_pre_sum[k] / static_cast<double>(bucket.count);
      }
    }
    if (bucket.decoded_count > 0) {
      stats.fidelity_mean =
          bucket.fid_sum / static_cast<double>(bucket.decoded_count);
      stats.fidelity_std =
          sample_std(bucket.fid_sum, bucket.fid_sq_sum, bucket.decoded_count);
      for (int k = 0; k < 3; ++k) {
        stats.bloch_post_recovery[k] =
            bucket.bloch_post_sum[k] / static_cast<double>(bucket.decoded_count);
      }
      if (config.tomography) {
        std::mt19937_64 sample_rng =
            derive_stream(seed, kTomographyStreamBase + tomo_stream);
        std::mt19937_64 mc_rng =
            derive_stream(seed, kMonteCarloStreamBase + tomo_stream);
        stats.tomography =
            tomography_estimate(bucket.decoded_rho_sum, bucket.decoded_count,
                                ideal, config, sample_rng, mc_rng);
      }
    }
    report.syndromes[label] = stats;
    ++tomo_stream;
  }

  report.bloch_ideal = bloch_of_pure(ideal);
  if (report.decoded_count > 0) {
    const Eigen::Matrix2cd avg =
        decoded_rho_sum / static_cast<double>(report.decoded_count);
    const DensityMatrix rho(1, 0.5 * (avg + avg.adjoint()));
    report.bloch_decoded = bloch_vector(rho);
    report.decoded_fidelity = EstimateWithError{
        fid_sum / static_cast<double>(report.decoded_count),
        sample_std(fid_sum, fid_sq_sum, report.decoded_count)};
    if (config.tomography) {
      std::mt19937_64 sample_rng =
          derive_stream(seed, kTomographyStreamBase + 100);
      std::mt19937_64 mc_rng = derive_stream(seed, kMonteCarloStreamBase + 100);
      report.tomography =
          tomography_estimate(decoded_rho_sum, report.decoded_count, ideal,
                              config, sample_rng, mc_rng);
    }
  }
  return report;
}

}  // namespace mbqec::cli
