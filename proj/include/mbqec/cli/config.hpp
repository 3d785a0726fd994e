#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbqec/code.hpp"

namespace mbqec::cli {

/// Configuration problem with the offending line and field attached.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// ideal and box are synonyms; lab selects the physically produced state
/// mapped into the working frame; graph builds a custom 4-qubit graph state.
enum class ResourceKind { ideal, lab, graph, white_noise, white_noise_fidelity };
enum class OutputFormat { json, csv };

/// One batch scenario: which input to protect, which error to inject,
/// whether its location is declared known, the resource model, and the
/// sampling/tomography/reporting knobs.
struct ScenarioConfig {
  LogicalInput input;
  std::string input_spec;  // the config-file value, echoed in reports

  ErrorSpec error{};  // angle defaults to pi/2 when an error is selected
  bool location_known = true;

  ResourceKind resource_kind = ResourceKind::ideal;
  double resource_param = 1.0;  // mixing weight p or target fidelity F
  std::vector<std::pair<int, int>> graph_edges;  // for ResourceKind::graph

  std::uint64_t shots = 10000;
  bool tomography = false;
  std::uint64_t tomography_shots_per_setting = 10000;
  int monte_carlo_cycles = 100;

  std::optional<std::uint64_t> seed;  // generated and echoed when absent

  std::string output_path;  // empty = stdout
  OutputFormat format = OutputFormat::json;

  /// Mixing weight p of the 4-qubit resource implied by the resource model.
  double resolved_noise_weight() const;
  std::string resource_label() const;
  std::string error_label() const;
};

/// Parses the flat key-value scenario grammar (see README). Unknown keys,
/// duplicate keys, malformed values and out-of-range parameters raise
/// ConfigError with line/field diagnostics.
ScenarioConfig parse_config(std::string_view text);

/// Angle literals require an explicit unit: "90deg", "1.5707rad", or a
/// radian pi-fraction such as "pi/2", "3pi/8", "pi". Bare "0" is allowed.
double parse_angle(const std::string& text);

}  // namespace mbqec::cli
