#include "mbqec/cli/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mbqec/version.hpp"

namespace mbqec::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string recovery_name(RecoveryOp op) {
  switch (op) {
    case RecoveryOp::identity: return "identity";
    case RecoveryOp::x: return "X";
    case RecoveryOp::detect_only_abort: return "detect_only_abort";
  }
  return "?";
}

nlohmann::json estimate_json(const EstimateWithError& e) {
  return {{"mean", e.mean}, {"std", e.std}};
}

nlohmann::json tomography_json(const TomographyEstimate& t) {
  return {{"shots_per_setting", t.shots_per_setting},
          {"monte_carlo_cycles", t.cycles},
          {"fidelity", estimate_json(t.fidelity)},
          {"bloch_x", estimate_json(t.bloch[0])},
          {"bloch_y", estimate_json(t.bloch[1])},
          {"bloch_z", estimate_json(t.bloch[2])}};
}

std::string angle_name(double angle) {
  if (std::abs(angle - kPi / 2) < 1e-9) return "pi/2";
  if (std::abs(angle - kPi / 4) < 1e-9) return "pi/4";
  std::ostringstream out;
  out << angle << "rad";
  return out.str();
}

}  // namespace

nlohmann::json report_to_json(const RunReport& report) {
  const ScenarioConfig& config = report.config;
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["seed"] = report.seed;

  nlohmann::json cfg;
  cfg["input_state"] = config.input_spec.empty()
                           ? config.input.name()
                           : config.input_spec;
  cfg["input_alpha"] = {config.input.alpha().real(),
                        config.input.alpha().imag()};
  cfg["input_beta"] = {config.input.beta().real(), config.input.beta().imag()};
  cfg["input_theta_deg"] = config.input.theta_deg();
  cfg["input_phi_deg"] = config.input.phi_deg();
  cfg["error"] = config.error_label();
  cfg["error_angle_rad"] = config.error.angle;
  cfg["hypothesis"] =
      config.location_known ? "known_location" : "unknown_location";
  cfg["resource"] = config.resource_label();
  cfg["resource_noise_weight"] = config.resolved_noise_weight();
  cfg["shots"] = config.shots;
  cfg["tomography"] = config.tomography;
  if (config.tomography) {
    cfg["tomography_shots_per_setting"] = config.tomography_shots_per_setting;
    cfg["monte_carlo_cycles"] = config.monte_carlo_cycles;
  }
  j["config"] = cfg;

  j["branches"] = {{"primary", report.primary_count},
                   {"secondary", report.secondary_count},
                   {"secondary_corrected", report.secondary_corrected_count},
                   {"secondary_uncorrected",
                    report.secondary_count - report.secondary_corrected_count}};

  nlohmann::json syndromes;
  for (const auto& [label, stats] : report.syndromes) {
    nlohmann::json s;
    s["count"] = stats.count;
    s["frequency"] = stats.frequency;
    s["expected_probability"] = stats.expected_probability;
    if (stats.recovery) s["recovery"] = recovery_name(*stats.recovery);
    s["decoded_count"] = stats.decoded_count;
    if (stats.decoded_count > 0) {
      s["fidelity"] = {{"mean", stats.fidelity_mean},
                       {"std", stats.fidelity_std}};
      s["bloch_post_recovery"] = stats.bloch_post_recovery;
    }
    if (stats.count > 0) s["bloch_pre_recovery"] = stats.bloch_pre_recovery;
    if (stats.tomography) s["tomography"] = tomography_json(*stats.tomography);
    syndromes[label] = s;
  }
  j["syndromes"] = syndromes;

  j["counts"] = {{"decoded", report.decoded_count},
                 {"detect_only_aborts", report.detect_abort_count},
                 {"mismatch_aborts", report.mismatch_abort_count},
                 {"confusable", report.confusable_count}};

  nlohmann::json decoded;
  decoded["bloch_ideal"] = report.bloch_ideal;
  if (report.decoded_count > 0) {
    decoded["bloch_simulated"] = report.bloch_decoded;
    decoded["fidelity"] = estimate_json(report.decoded_fidelity);
  }
  if (report.tomography) decoded["tomography"] = tomography_json(*report.tomography);
  j["decoded"] = decoded;
  return j;
}

namespace {

void csv_row(std::ostringstream& out, const std::string& key,
             const nlohmann::json& value) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) {
      csv_row(out, key.empty() ? k : key + "." + k, v);
    }
  } else if (value.is_array()) {
    int idx = 0;
    for (const auto& v : value) {
      csv_row(out, key + "." + std::to_string(idx++), v);
    }
  } else {
    out << key << "," << value.dump() << "\n";
  }
}

}  // namespace

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "key,value\n";
  csv_row(out, "", report_to_json(report));
  return out.str();
}

std::string render_report(const RunReport& report, OutputFormat format) {
  if (format == OutputFormat::csv) return report_to_csv(report);
  return report_to_json(report).dump(2) + "\n";
}

std::vector<ReferenceEntry> load_reference_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open reference table '" + path + "'");
  }
  std::vector<ReferenceEntry> entries;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {  // skip the column header row
      header = false;
      continue;
    }
    std::istringstream row(line);
    ReferenceEntry e;
    std::string fid, std_;
    if (!std::getline(row, e.state, ',') || !std::getline(row, e.error, ',') ||
        !std::getline(row, e.angle, ',') ||
        !std::getline(row, e.projected, ',') ||
        !std::getline(row, e.recovery, ',') || !std::getline(row, fid, ',') ||
        !std::getline(row, std_, ',')) {
      throw std::runtime_error("malformed reference row at line " +
                               std::to_string(lineno));
    }
    e.fidelity = std::stod(fid);
    e.std = std::stod(std_);
    entries.push_back(std::move(e));
  }
  return entries;
}

namespace {

const ReferenceEntry* find_reference(const std::vector<ReferenceEntry>& table,
                                     const std::string& state,
                                     const std::string& error,
                                     const std::string& angle,
                                     const std::string& projected,
                                     const std::string& recovery) {
  for (const auto& e : table) {
    if (e.state == state && e.error == error && e.angle == angle &&
        e.projected == projected && e.recovery == recovery) {
      return &e;
    }
  }
  return nullptr;
}

// Fidelity estimate of the shots that landed on one syndrome, preferring the
// tomographic reconstruction when it was run. Without tomography the error
// bar is the standard error of the reported mean.
std::optional<EstimateWithError> cell_estimate(const RunReport& report,
                                               const std::string& syndrome) {
  const auto it = report.syndromes.find(syndrome);
  if (it == report.syndromes.end() || it->second.decoded_count == 0) {
    return std::nullopt;
  }
  if (it->second.tomography) return it->second.tomography->fidelity;
  return EstimateWithError{
      it->second.fidelity_mean,
      it->second.fidelity_std /
          std::sqrt(static_cast<double>(it->second.decoded_count))};
}

std::string format_cell(const std::optional<EstimateWithError>& est,
                        const ReferenceEntry* ref) {
  std::ostringstream out;
  if (est) {
    out << std::fixed << std::setprecision(3) << est->mean << " +- "
        << est->std;
  } else {
    out << "      --     ";
  }
  if (ref) {
    out << "  [ref " << std::fixed << std::setprecision(3) << ref->fidelity
        << " +- " << ref->std << "]";
  }
  return out.str();
}

struct CellSpec {
  std::string error;      // scenario error column
  std::string projected;  // syndrome-projected case label
  std::string syndrome_no_recovery;
  std::string syndrome_recovery;
};

}  // namespace

std::string emit_table_reproduction(
    const std::vector<RunReport>& reports,
    const std::vector<ReferenceEntry>& reference) {
  if (reports.empty()) return "(no reports)\n";

  std::string angle = "pi/2";
  for (const auto& r : reports) {
    if (r.config.error.target != ErrorTarget::none) {
      angle = angle_name(r.config.error.angle);
      break;
    }
  }
  // Which syndrome feeds each (column, recovery block) cell follows from the
  // recovery table: identity cells collect the I-syndrome of the projected
  // case, recovery cells the X-syndrome.
  std::vector<CellSpec> cells;
  if (angle == "pi/4") {
    cells = {{"Z3", "none", "++", "--"},
             {"Z3", "Z3", "+-", "-+"},
             {"Z2", "none", "++", "--"},
             {"Z2", "Z2", "-+", "+-"}};
  } else {
    cells = {{"none", "none", "++", "--"},
             {"Z3", "Z3", "+-", "-+"},
             {"Z2", "Z2", "-+", "+-"},
             {"Z2Z3", "Z2Z3", "++", "--"}};
  }

  // reports keyed by (state, error column)
  auto find_report = [&reports](const std::string& state,
                                const std::string& error) -> const RunReport* {
    for (const auto& r : reports) {
      if (r.config.input.name() == state && r.config.error_label() == error) {
        return &r;
      }
    }
    return nullptr;
  };

  std::ostringstream out;
  out << "# decoded-state fidelities, error angle " << angle << ", resource "
      << reports.front().config.resource_label() << ", "
      << reports.front().config.shots << " shots per scenario\n";
  if (!reference.empty()) {
    out << "# [ref ...] columns quote published experimental values from the "
           "bundled data file; they are not simulated output\n";
  }
  for (const std::string block : {"no recovery", "recovery X"}) {
    out << "\n## " << block << "\n";
    out << std::left << std::setw(8) << "state";
    for (const auto& cell : cells) {
      std::string label = cell.error;
      if (angle == "pi/4") label += " proj " + cell.projected;
      out << std::setw(reference.empty() ? 18 : 42) << label;
    }
    out << "\n";
    for (const auto& input : catalog_states()) {
      out << std::left << std::setw(8) << input.name();
      for (const auto& cell : cells) {
        const RunReport* report = find_report(input.name(), cell.error);
        const std::string syndrome = block == "no recovery"
                                         ? cell.syndrome_no_recovery
                                         : cell.syndrome_recovery;
        std::optional<EstimateWithError> est;
        if (report) est = cell_estimate(*report, syndrome);
        const ReferenceEntry* ref =
            reference.empty()
                ? nullptr
                : find_reference(reference, input.name(), cell.error, angle,
                                 cell.projected,
                                 block == "no recovery" ? "none" : "X");
        out << std::setw(reference.empty() ? 18 : 42)
            << format_cell(est, ref);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string emit_bloch_data(const RunReport& report) {
  std::ostringstream out;
  out << "label,x,y,z\n" << std::setprecision(10);
  out << "ideal," << report.bloch_ideal[0] << "," << report.bloch_ideal[1]
      << "," << report.bloch_ideal[2] << "\n";
  if (report.decoded_count > 0) {
    out << "post_recovery," << report.bloch_decoded[0] << ","
        << report.bloch_decoded[1] << "," << report.bloch_decoded[2] << "\n";
  }
  for (const auto& [label, stats] : report.syndromes) {
    if (stats.count == 0) continue;
    out << "pre_recovery/" << label << "," << stats.bloch_pre_recovery[0]
        << "," << stats.bloch_pre_recovery[1] << ","
        << stats.bloch_pre_recovery[2] << "\n";
    if (stats.decoded_count > 0) {
      out << "post_recovery/" << label << "," << stats.bloch_post_recovery[0]
          << "," << stats.bloch_post_recovery[1] << ","
          << stats.bloch_post_recovery[2] << "\n";
    }
  }
  return out.str();
}

std::string catalog_table() {
  std::ostringstream out;
  out << std::left << std::setw(6) << "name" << std::setw(10) << "basis"
      << std::setw(24) << "alpha" << std::setw(24) << "beta" << std::setw(10)
      << "theta" << std::setw(10) << "phi" << "\n";
  for (const auto& s : catalog_states()) {
    std::ostringstream a, b;
    a << std::fixed << std::setprecision(5) << "(" << s.alpha().real() << ","
      << s.alpha().imag() << ")";
    b << std::fixed << std::setprecision(5) << "(" << s.beta().real() << ","
      << s.beta().imag() << ")";
    out << std::left << std::setw(6) << s.name() << std::setw(10) << s.axis()
        << std::setw(24) << a.str() << std::setw(24) << b.str();
    out << std::fixed << std::setprecision(1) << std::setw(10) << s.theta_deg()
        << std::setw(10) << s.phi_deg() << "\n";
  }
  return out.str();
}

}  // namespace mbqec::cli
