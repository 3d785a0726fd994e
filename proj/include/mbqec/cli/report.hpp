#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mbqec/cli/scenario.hpp"

#include <json.hpp>

namespace mbqec::cli {

nlohmann::json report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);
std::string render_report(const RunReport& report, OutputFormat format);

/// Reference fidelity row: a published decoded-qubit value shipped as data.
/// These are display-only; they never act as test oracles.
struct ReferenceEntry {
  std::string state;      // catalog name
  std::string error;      // none | Z2 | Z3 | Z2Z3
  std::string angle;      // pi/2 | pi/4
  std::string projected;  // syndrome-projected case: none | Z2 | Z3
  std::string recovery;   // none | X
  double fidelity = 0.0;
  double std = 0.0;
};

std::vector<ReferenceEntry> load_reference_table(const std::string& path);

/// Renders the decoded-fidelity grid (states x error columns, split into a
/// no-recovery and a recovery-X block) from a set of scenario reports.
/// Missing grid cells are printed as gaps. When reference rows are given,
/// each cell also shows the published value, clearly labeled.
std::string emit_table_reproduction(
    const std::vector<RunReport>& reports,
    const std::vector<ReferenceEntry>& reference = {});

/// (label, x, y, z) plot records for the ideal input, the post-recovery
/// decode, and the pre-recovery decode per syndrome.
std::string emit_bloch_data(const RunReport& report);

/// The nine named inputs with amplitudes, eigenbasis and angles.
std::string catalog_table();

}  // namespace mbqec::cli
