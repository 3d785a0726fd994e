#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mbqec/cli/config.hpp"
#include "mbqec/cli/report.hpp"
#include "mbqec/cli/scenario.hpp"
#include "mbqec/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& format_override,
            std::optional<std::uint64_t> seed_override,
            std::optional<std::uint64_t> shots_override) {
  mbqec::cli::ScenarioConfig config =
      mbqec::cli::parse_config(read_file(config_path));
  if (seed_override) config.seed = *seed_override;
  if (shots_override) {
    if (*shots_override < 1) {
      throw mbqec::cli::ConfigError(0, "shots", "shots must be >= 1");
    }
    config.shots = *shots_override;
  }
  if (!out_override.empty()) config.output_path = out_override;
  if (!format_override.empty()) {
    if (format_override == "json") {
      config.format = mbqec::cli::OutputFormat::json;
    } else if (format_override == "csv") {
      config.format = mbqec::cli::OutputFormat::csv;
    } else {
      throw mbqec::cli::ConfigError(0, "format", "expected json or csv");
    }
  }
  const mbqec::cli::RunReport report = mbqec::cli::run_scenario(config);
  write_output(config.output_path,
               mbqec::cli::render_report(report, config.format));
  return kExitOk;
}

int cmd_tables(const std::string& angle_text, const std::string& resource,
               std::uint64_t shots, std::uint64_t seed, bool tomography,
               std::uint64_t tomo_shots, const std::string& reference_path,
               const std::string& out_path) {
  const bool quarter = angle_text == "pi/4";
  std::vector<std::string> errors =
      quarter ? std::vector<std::string>{"Z3", "Z2"}
              : std::vector<std::string>{"none", "Z3", "Z2", "Z2Z3"};

  std::vector<mbqec::cli::RunReport> reports;
  std::uint64_t scenario_index = 0;
  for (const auto& input : mbqec::catalog_states()) {
    for (const auto& error : errors) {
      std::ostringstream cfg;
      cfg << "input_state = " << input.name() << "\n";
      cfg << "error = " << error << "\n";
      if (error != "none") cfg << "error_angle = " << angle_text << "\n";
      cfg << "resource = " << resource << "\n";
      cfg << "shots = " << shots << "\n";
      cfg << "seed = " << (seed + scenario_index) << "\n";
      if (tomography) {
        cfg << "tomography = on\n";
        cfg << "tomography_shots_per_setting = " << tomo_shots << "\n";
      }
      reports.push_back(mbqec::cli::run_scenario(
          mbqec::cli::parse_config(cfg.str())));
      ++scenario_index;
    }
  }

  std::vector<mbqec::cli::ReferenceEntry> reference;
  if (!reference_path.empty()) {
    reference = mbqec::cli::load_reference_table(reference_path);
  } else {
    // default bundled location, silently omitted when absent
    const std::string bundled = "data/reference_fidelities.csv";
    if (std::filesystem::exists(bundled)) {
      reference = mbqec::cli::load_reference_table(bundled);
    }
  }
  write_output(out_path,
               mbqec::cli::emit_table_reproduction(reports, reference));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(mbqec::kToolName) +
               " - measurement-based phase-error detection simulator"};
  app.set_version_flag("--version", std::string(mbqec::kToolVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a scenario config file");
  std::string config_path, out_path, format;
  std::optional<std::uint64_t> seed_override, shots_override;
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_path, "report output path (default stdout)");
  run->add_option("--format", format, "json or csv (overrides config)");
  run->add_option("--seed", seed_override, "seed override");
  run->add_option("--shots", shots_override, "shot-count override");

  auto* catalog = app.add_subcommand("catalog", "print the named input states");

  auto* tables = app.add_subcommand(
      "tables", "run the full state x error grid and print the fidelity table");
  std::string angle_text = "pi/2";
  std::string resource = "ideal";
  std::uint64_t shots = 10000, table_seed = 1, tomo_shots = 10000;
  bool tomography = false;
  std::string reference_path, tables_out;
  tables->add_option("--angle", angle_text, "pi/2 or pi/4 (default pi/2)");
  tables->add_option("--resource", resource,
                     "ideal | white_noise(p) | white_noise_fidelity(F)");
  tables->add_option("--shots", shots, "shots per scenario (default 10000)");
  tables->add_option("--seed", table_seed, "base seed (default 1)");
  tables->add_flag("--tomography", tomography,
                   "reconstruct decoded qubits per syndrome");
  tables->add_option("--tomography-shots", tomo_shots,
                     "tomography shots per setting (default 10000)");
  tables->add_option("--reference", reference_path,
                     "reference fidelity CSV (default: bundled data file)");
  tables->add_option("--out", tables_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_path, format, seed_override,
                     shots_override);
    }
    if (catalog->parsed()) {
      std::cout << mbqec::cli::catalog_table();
      return kExitOk;
    }
    if (tables->parsed()) {
      if (angle_text != "pi/2" && angle_text != "pi/4") {
        throw mbqec::cli::ConfigError(0, "angle", "expected pi/2 or pi/4");
      }
      return cmd_tables(angle_text, resource, shots, table_seed, tomography,
                        tomo_shots, reference_path, tables_out);
    }
  } catch (const mbqec::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}
