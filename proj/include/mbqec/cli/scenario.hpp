#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mbqec/cli/config.hpp"
#include "mbqec/code.hpp"
#include "mbqec/noisetomo.hpp"

namespace mbqec::cli {

/// Point estimate from the observed counts plus a Poissonian Monte-Carlo
/// standard deviation, for the decoded qubit's tomographic reconstruction.
struct TomographyEstimate {
  std::uint64_t shots_per_setting = 0;
  int cycles = 0;
  EstimateWithError fidelity{};
  std::array<EstimateWithError, 3> bloch{};
};

/// What happened on the shots that produced one syndrome.
struct SyndromeStats {
  std::uint64_t count = 0;
  double frequency = 0.0;
  double expected_probability = 0.0;
  std::optional<RecoveryOp> recovery;  // absent for mismatch aborts
  std::uint64_t decoded_count = 0;
  double fidelity_mean = 0.0;
  double fidelity_std = 0.0;
  std::array<double, 3> bloch_pre_recovery{};
  std::array<double, 3> bloch_post_recovery{};
  std::optional<TomographyEstimate> tomography;
};

struct RunReport {
  ScenarioConfig config;
  std::uint64_t seed = 0;  // the seed actually used
  std::uint64_t shots = 0;

  std::uint64_t primary_count = 0;
  std::uint64_t secondary_count = 0;
  std::uint64_t secondary_corrected_count = 0;

  std::map<std::string, SyndromeStats> syndromes;

  std::uint64_t decoded_count = 0;
  std::uint64_t detect_abort_count = 0;
  std::uint64_t mismatch_abort_count = 0;
  std::uint64_t confusable_count = 0;

  std::array<double, 3> bloch_ideal{};
  std::array<double, 3> bloch_decoded{};  // post-recovery shot average
  EstimateWithError decoded_fidelity{};   // exact per-shot mean and std
  std::optional<TomographyEstimate> tomography;  // aggregate over decoded shots
};

/// Executes `shots` protocol runs and aggregates them. Deterministic for a
/// fixed seed: every shot draws its own random stream derived from
/// (seed, shot index), so results do not depend on execution order.
RunReport run_scenario(const ScenarioConfig& config);

/// Exact per-syndrome Born probabilities for a scenario, summed over the
/// resource's pure components and both encoding branches.
std::map<std::string, double> expected_syndrome_distribution(
    const PureStateEnsemble& resource, const LogicalInput& input,
    const ErrorSpec& error);

}  // namespace mbqec::cli
