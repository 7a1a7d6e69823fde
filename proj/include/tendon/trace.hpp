#pragma once

#include "tendon/types.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tendon {

/// One control tick of a scenario run.
struct TraceRow {
  double time = 0.0;
  VecX theta_true;       // [rad]
  VecX theta_hat;        // [rad]
  VecX theta_target;     // [rad]
  VecX commanded;        // [kgf]
  VecX realized;         // [kgf]
  VecX measured_len;     // [m]
  VecX target_len;       // [m]
  VecX stiffness;        // [kgf/mm]
  VecX s;                // classification value per muscle
  std::vector<bool> agonist;
  VecX temperature;      // [degC]
  std::vector<int> pair_state;
};

struct ScenarioTrace {
  std::vector<std::string> joint_names;
  std::vector<std::string> muscle_names;
  std::vector<std::pair<std::string, std::string>> pair_names;
  std::vector<TraceRow> rows;
};

/// Summary numbers of a run. Settled ticks are the last half of each
/// waypoint hold phase.
struct Metrics {
  double max_tension = 0.0;              // [kgf] max realized anywhere
  std::vector<double> settle_error_deg;  // per waypoint, max over joints
  double slack_fraction = 0.0;           // settled ticks with any tension < 0.1 T_bias
  double cocontraction_index = 0.0;      // [kgf] mean over settled ticks of the
                                         // smallest pair excess above T_bias
  double peak_temperature = 0.0;         // [degC]
};

/// CSV export: header with stable documented column names, one row per
/// control tick, floats at 9 significant digits. Angles are written in
/// degrees and tensions in kgf. Byte-identical for identical traces.
void export_trace(const ScenarioTrace& trace, const std::filesystem::path& path);

/// The header export_trace would write (used by tests and docs).
std::string trace_header(const ScenarioTrace& trace);

}  // namespace tendon
